#pragma once

#include "she/functions.hpp"
#include "she/quadrature.hpp"

namespace she::norms {

struct NormResult {
  double value = 0.0;  // the norm (not its square); inf when diverged
  bool diverged = false;
};

// growth exponents at or above this make the weighted norms infinite
double growth_threshold(double t);

// pointwise energy norm at (t, x): square is
//   |x| (4 pi t)^{-1/4} Integral f(z)^2 (sqrt(t) + z^2) exp(-sqrt(pi) z^2 / (2 sqrt(t))) dz
NormResult norm_Ht(const fns::TestFunction& f, double t, double x,
                   const QuadratureConfig& quad);

// time-aggregated norm on [0, T]: square is
//   (4 pi)^{-1/4} Integral_0^T s^{-3/4} Integral f(z)^2 exp(-sqrt(pi) z^2 / (2 sqrt(s))) dz ds,
// evaluated on the clock s = v^4 which removes the s^{-3/4} density exactly
NormResult norm_Hstar(const fns::TestFunction& f, double T, const QuadratureConfig& quad);

}  // namespace she::norms
