#pragma once

#include "she/quadrature.hpp"

namespace she::kernels {

struct CovQuery {
  double t, x, s, y;
};

struct Moments {
  double sigma2_t = 0.0;
  double sigma2_s = 0.0;
  double mu = 0.0;
  double rho2 = 0.0;
  bool degenerate = false;
};

// Gaussian heat kernel exp(-x^2/(2t)) / sqrt(2 pi t); t > 0.
double heat_kernel(double t, double x);

// Var u(t,x) = sqrt(t/pi).
double variance(double t);

// E[u(t,x) u(s,x)] = (sqrt(t+s) - sqrt(|t-s|)) / sqrt(2 pi).
double cov_time(double t, double s);

// E[u(t,x) u(s,y)], adaptive quadrature of the substituted integrand
// (1/sqrt(2 pi)) exp(-z^2/(2 v^2)) over v in [sqrt(|t-s|), sqrt(t+s)].
double cov_spacetime(const CovQuery& q, const QuadratureConfig& quad);

// antiderivative route for the same quantity, used for bulk matrix fills
double cov_spacetime_closed(double t, double x, double s, double y);

// equal-time covariance E[u(t,x) u(t,y)], quadrature route
double cov_space(double t, double x, double y, const QuadratureConfig& quad);
double cov_space_closed(double t, double x, double y);

// equal-time decay factor f_t(d) with cov_space = variance(t) * f_t(d);
// evaluated as exp(-d^2/(4t)) - (d/(2t)) * Integral_d^inf exp(-r^2/(4t)) dr
double tail_ratio(double t, double d, const QuadratureConfig& quad);
double tail_ratio_closed(double t, double d);

// Increment correction Delta(s,t,z) for 0 <= s <= t: closed elementary part
// plus a quadrature of the exponential correction term.
double delta_increment(double s, double t, double z, const QuadratureConfig& quad);
double delta_increment_closed(double s, double t, double z);

// E[(u(t,x) - u(s,y))^2] = (sqrt(2(t-s)) + Delta(s,t,x-y)) / sqrt(2 pi), t >= s.
// Arguments in either time order; they are swapped internally.
double increment_second_moment(double t, double x, double s, double y,
                               const QuadratureConfig& quad);

// Gaussian pair (u(t,x), u(s,x)) moments and determinant rho^2 for 0 < s < t;
// s in {0, t} is reported through the degenerate flag with rho2 = 0.
Moments moments_time_pair(double t, double s);

}  // namespace she::kernels
