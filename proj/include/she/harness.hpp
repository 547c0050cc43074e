#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "she/config.hpp"
#include "she/quadrature.hpp"

namespace she::harness {

struct CriterionLine {
  std::string id;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string kind;
  std::string config_fingerprint;
  std::vector<CriterionLine> criteria;
  nlohmann::ordered_json detail;  // per-kind payload, deterministic
  double wall_clock_s = 0.0;
  std::string started_at;
  bool interrupted = false;

  bool all_pass() const;
};

// deterministic except for the "timestamp" object, which holds the wall clock
nlohmann::ordered_json to_json(const RunReport& r);
void write_report(const RunReport& r, const std::string& path);  // tmp + rename

// cooperative interrupt: a signal handler sets the flag, replicate loops poll
// it, partial results are flushed with interrupted = true
void request_interrupt();
bool interrupt_requested();
void clear_interrupt();

// dispatch on config key "kind": sample | qv | pqc | ito | localtime |
// lemmas | scaling | report
RunReport run(const cfg::KvConfig& config);

enum class ScalingKind { space, time, joint };

struct ScalingRow {
  double level = 0.0;
  double k = 0.0;  // joint anisotropy parameter; 0 for the marginal kinds
  double value = 0.0;
  double target = 0.0;
  double ratio = 0.0;
};

struct ScalingResult {
  ScalingKind kind = ScalingKind::space;
  std::vector<ScalingRow> rows;
  double worst_final_err = 0.0;  // max |ratio - 1| on the finest level
};

// Small-separation limits of the increment second moment through the
// quadrature route: spatial (1/eps) E[dW^2] -> 1, temporal
// (1/sqrt(eps)) E[dB^2] -> sqrt(2/pi), and the joint diagonal
// eps_t = k eps_x^2 against its anisotropic limit.
ScalingResult scaling_limit_check(ScalingKind kind, double t, double x,
                                  const std::vector<double>& levels,
                                  const QuadratureConfig& quad);

}  // namespace she::harness
