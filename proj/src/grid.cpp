#include "she/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "she/common.hpp"

namespace she {

namespace {

bool uniform(const std::vector<double>& v, double step) {
  if (v.size() < 2) return true;
  if (step <= 0.0) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double expect = v[0] + double(i) * step;
    if (std::abs(v[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) return false;
  }
  return true;
}

void check_ascending(const std::vector<double>& v, const char* what) {
  for (double u : v)
    if (!std::isfinite(u)) throw ConfigError(std::string(what) + " must be finite");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw ConfigError(std::string(what) + " must be strictly ascending");
}

}  // namespace

void FieldGrid::validate() const {
  if (times.empty() || spaces.empty()) throw ConfigError("grid axes must be nonempty");
  check_ascending(times, "grid times");
  check_ascending(spaces, "grid spaces");
  if (times.front() < 0.0) throw ConfigError("grid times must be >= 0");
  if (points() > max_points)
    throw CapacityError("grid holds " + std::to_string(points()) +
                        " points, cap is " + std::to_string(max_points));
}

bool FieldGrid::uniform_times() const { return uniform(times, dt); }
bool FieldGrid::uniform_spaces() const { return uniform(spaces, dx); }

FieldGrid time_slice_grid(double x, double t_max, double dt, std::size_t max_points) {
  if (!(dt > 0.0) || !(t_max > 0.0)) throw ConfigError("time slice needs t_max > 0, dt > 0");
  FieldGrid g;
  g.dt = dt;
  g.dx = 0.0;
  g.max_points = max_points;
  const auto n = std::size_t(std::llround(t_max / dt));
  if (std::abs(double(n) * dt - t_max) > 1e-9 * t_max)
    throw ConfigError("t_max must be a multiple of dt");
  if (n + 1 > max_points)
    throw CapacityError("grid holds " + std::to_string(n + 1) + " points, cap is " +
                        std::to_string(max_points));
  g.times.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.times.push_back(double(i) * dt);
  g.spaces = {x};
  g.validate();
  return g;
}

FieldGrid space_slice_grid(double t, double x_min, double x_max, double dx,
                           std::size_t max_points) {
  if (!(dx > 0.0) || !(x_max > x_min)) throw ConfigError("space slice needs x_max > x_min, dx > 0");
  if (!(t > 0.0)) throw ConfigError("space slice needs t > 0");
  FieldGrid g;
  g.dt = 0.0;
  g.dx = dx;
  g.max_points = max_points;
  const auto n = std::size_t(std::llround((x_max - x_min) / dx));
  if (std::abs(double(n) * dx - (x_max - x_min)) > 1e-9 * (x_max - x_min))
    throw ConfigError("x_max - x_min must be a multiple of dx");
  if (n + 1 > max_points)
    throw CapacityError("grid holds " + std::to_string(n + 1) + " points, cap is " +
                        std::to_string(max_points));
  g.times = {t};
  g.spaces.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.spaces.push_back(x_min + double(i) * dx);
  g.validate();
  return g;
}

FieldGrid rect_grid(const std::vector<double>& times, const std::vector<double>& spaces,
                    std::size_t max_points) {
  FieldGrid g;
  g.times = times;
  g.spaces = spaces;
  g.max_points = max_points;
  if (times.size() > 1) g.dt = times[1] - times[0];
  if (spaces.size() > 1) g.dx = spaces[1] - spaces[0];
  if (!g.uniform_times()) g.dt = 0.0;
  if (!g.uniform_spaces()) g.dx = 0.0;
  g.validate();
  return g;
}

PathView slice_space(const FieldSample& s, std::size_t time_index) {
  const FieldGrid& g = *s.grid;
  if (time_index >= g.nt()) throw std::out_of_range("time index");
  PathView v;
  v.data = s.values.data() + time_index * g.nx();
  v.n = g.nx();
  v.stride = 1;
  v.origin = g.spaces.front();
  v.step = g.dx;
  return v;
}

PathView slice_time(const FieldSample& s, std::size_t space_index) {
  const FieldGrid& g = *s.grid;
  if (space_index >= g.nx()) throw std::out_of_range("space index");
  PathView v;
  v.data = s.values.data() + space_index;
  v.n = g.nt();
  v.stride = g.nx();
  v.origin = g.times.front();
  v.step = g.dt;
  return v;
}

void write_binary(const FieldSample& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'S', 'H', 'E', 'F'};
  const std::uint32_t version = 1;
  const std::uint64_t nt = s.grid->nt(), nx = s.grid->nx();
  const std::uint32_t rep = s.replicate, pad = 0;
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&nt), 8);
  out.write(reinterpret_cast<const char*>(&nx), 8);
  out.write(reinterpret_cast<const char*>(&s.seed), 8);
  out.write(reinterpret_cast<const char*>(&rep), 4);
  out.write(reinterpret_cast<const char*>(&pad), 4);
  auto vec = [&out](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * 8));
  };
  vec(s.grid->times);
  vec(s.grid->spaces);
  vec(s.values);
  if (!out) throw std::runtime_error("short write to " + path);
}

FieldSample read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t nt = 0, nx = 0, seed = 0;
  std::uint32_t rep = 0, pad = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (!in || std::memcmp(magic, "SHEF", 4) != 0 || version != 1)
    throw std::runtime_error("bad field file header in " + path);
  in.read(reinterpret_cast<char*>(&nt), 8);
  in.read(reinterpret_cast<char*>(&nx), 8);
  in.read(reinterpret_cast<char*>(&seed), 8);
  in.read(reinterpret_cast<char*>(&rep), 4);
  in.read(reinterpret_cast<char*>(&pad), 4);
  if (!in || nt == 0 || nx == 0 || nt * nx > (1u << 28))
    throw std::runtime_error("bad field file dims in " + path);
  auto grid = std::make_shared<FieldGrid>();
  grid->times.resize(nt);
  grid->spaces.resize(nx);
  grid->max_points = nt * nx;
  auto vec = [&in](std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * 8));
  };
  vec(grid->times);
  vec(grid->spaces);
  if (nt > 1) grid->dt = grid->times[1] - grid->times[0];
  if (nx > 1) grid->dx = grid->spaces[1] - grid->spaces[0];
  if (!grid->uniform_times()) grid->dt = 0.0;
  if (!grid->uniform_spaces()) grid->dx = 0.0;
  FieldSample s;
  s.grid = grid;
  s.seed = seed;
  s.replicate = rep;
  s.values.resize(nt * nx);
  vec(s.values);
  if (!in) throw std::runtime_error("short read from " + path);
  return s;
}

void write_csv(const FieldSample& s, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,x,value\n";
  char line[96];
  for (std::size_t i = 0; i < s.grid->nt(); ++i)
    for (std::size_t j = 0; j < s.grid->nx(); ++j) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", s.grid->times[i],
                    s.grid->spaces[j], s.at(i, j));
      out << line;
    }
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace she
