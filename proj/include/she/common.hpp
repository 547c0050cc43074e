#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace she {

inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double sqrt_2pi = 2.5066282746310005024;
inline constexpr double sqrt_2_over_pi = 0.7978845608028653559;

// quadrature failed to reach the requested tolerance; carries what was achieved
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& msg, double value, double achieved)
      : std::runtime_error(msg), value(value), achieved_error(achieved) {}
  double value;
  double achieved_error;
};

class CapacityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FactorizationError : public std::runtime_error {
public:
  FactorizationError(const std::string& msg, double jitter)
      : std::runtime_error(msg), final_jitter(jitter) {}
  double final_jitter;
};

// fixed-order pairwise sum, deterministic across thread counts
inline double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

}  // namespace she
