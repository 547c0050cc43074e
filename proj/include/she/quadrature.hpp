#pragma once

#include <functional>

namespace she {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 2048;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int subdivisions = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 15(7) on a finite interval. Worst interval is split
// first. Throws nothing; inspect `converged`.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg);

// Same, but throws NumericalError when the tolerance cannot be met.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg);

}  // namespace she
