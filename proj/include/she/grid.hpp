#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace she {

struct FieldGrid {
  std::vector<double> times;   // ascending, >= 0
  std::vector<double> spaces;  // ascending
  double dt = 0.0;             // nominal steps; 0 when the axis is irregular
  double dx = 0.0;
  std::size_t max_points = 8192;  // cap on times*spaces, raise deliberately

  std::size_t nt() const { return times.size(); }
  std::size_t nx() const { return spaces.size(); }
  std::size_t points() const { return times.size() * spaces.size(); }
  void validate() const;  // throws ConfigError / CapacityError
  bool uniform_times() const;
  bool uniform_spaces() const;
};

// 0, dt, 2 dt, ..., t_max at a single space point
FieldGrid time_slice_grid(double x, double t_max, double dt, std::size_t max_points = 1u << 20);
// x_min, x_min+dx, ..., x_max at a single positive time
FieldGrid space_slice_grid(double t, double x_min, double x_max, double dx,
                           std::size_t max_points = 1u << 20);
FieldGrid rect_grid(const std::vector<double>& times, const std::vector<double>& spaces,
                    std::size_t max_points = 8192);

struct FieldSample {
  std::shared_ptr<const FieldGrid> grid;
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  std::vector<double> values;  // row-major times x spaces

  double at(std::size_t it, std::size_t ix) const {
    return values[it * grid->nx() + ix];
  }
};

// Fixed-stride window into one row or column of a sample, with the grid
// coordinates needed by the estimators.
struct PathView {
  const double* data = nullptr;
  std::size_t n = 0;
  std::size_t stride = 1;
  double origin = 0.0;  // coordinate of data[0]
  double step = 0.0;    // coordinate spacing, > 0 for estimator use
  double operator[](std::size_t i) const { return data[i * stride]; }
  double coord(std::size_t i) const { return origin + double(i) * step; }
};

PathView slice_space(const FieldSample& s, std::size_t time_index);  // field in x
PathView slice_time(const FieldSample& s, std::size_t space_index);  // field in t

void write_binary(const FieldSample& s, const std::string& path);
FieldSample read_binary(const std::string& path);
void write_csv(const FieldSample& s, const std::string& path);  // t,x,value

}  // namespace she
