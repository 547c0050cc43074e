#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace she::cfg {

// flat key=value file with optional [section] headers; section names prefix
// the keys as "section.key". '#' starts a comment. Unknown keys are kept and
// reported by validate_known.
struct KvConfig {
  std::map<std::string, std::string> kv;

  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  void set(const std::string& key, const std::string& value) { kv[key] = value; }
  // throws ConfigError naming every key outside the allowed set
  void validate_known(const std::vector<std::string>& allowed) const;

  // FNV-1a over the sorted key=value pairs, hex string
  std::string fingerprint() const;
};

}  // namespace she::cfg
