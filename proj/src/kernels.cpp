#include "she/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "she/common.hpp"

namespace she::kernels {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(name) + " must be finite");
}

void require_time(double t, const char* name) {
  require_finite(t, name);
  if (t < 0.0) throw std::domain_error(std::string(name) + " must be >= 0");
}

// antiderivative of exp(-z^2/(2 v^2)) in v, vanishing at v = 0:
//   g(v) = v exp(-z^2/(2 v^2)) - |z| sqrt(pi/2) erfc(|z| / (sqrt(2) v))
double g_anti(double v, double z) {
  if (v <= 0.0) return 0.0;
  const double az = std::abs(z);
  if (az == 0.0) return v;
  return v * std::exp(-0.5 * az * az / (v * v)) -
         az * std::sqrt(3.14159265358979323846 / 2.0) *
             std::erfc(az / (std::sqrt(2.0) * v));
}

// antiderivative of 1 - exp(-z^2/(2 r^2)) scaled for the increment correction:
//   P(r) = -(1 - exp(-r^2/2))/r + sqrt(pi/2) erf(r/sqrt(2)), P(0) = 0,
// so that Integral_a^b (1 - exp(-z^2/(2 w^2)))/|z| d(-|z|/w) ... appears as
// 2|z| (P(b) - P(a)) with a = |z|/sqrt(t+s), b = |z|/sqrt(t-s).
double p_anti(double r) {
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) return std::sqrt(3.14159265358979323846 / 2.0);
  double em;
  if (r < 1e-4) {
    // (1 - exp(-r^2/2))/r to full precision for tiny r
    const double q = 0.5 * r * r;
    em = r * (0.5 - q * (1.0 / 6.0) + q * q * (1.0 / 24.0));
  } else {
    em = (1.0 - std::exp(-0.5 * r * r)) / r;
  }
  return -em + std::sqrt(3.14159265358979323846 / 2.0) * std::erf(r / std::sqrt(2.0));
}

}  // namespace

double heat_kernel(double t, double x) {
  require_finite(x, "x");
  require_time(t, "t");
  if (t == 0.0) throw std::domain_error("heat kernel needs t > 0");
  return std::exp(-0.5 * x * x / t) / std::sqrt(2.0 * 3.14159265358979323846 * t);
}

double variance(double t) {
  require_time(t, "t");
  return std::sqrt(t) / sqrt_pi;
}

double cov_time(double t, double s) {
  require_time(t, "t");
  require_time(s, "s");
  return (std::sqrt(t + s) - std::sqrt(std::abs(t - s))) / sqrt_2pi;
}

double cov_spacetime(const CovQuery& q, const QuadratureConfig& quad) {
  require_time(q.t, "t");
  require_time(q.s, "s");
  require_finite(q.x, "x");
  require_finite(q.y, "y");
  const double lo = std::sqrt(std::abs(q.t - q.s));
  const double hi = std::sqrt(q.t + q.s);
  if (lo >= hi) return 0.0;
  const double z = q.x - q.y;
  const double z2 = 0.5 * z * z;
  const double val = integrate_checked(
      [z2](double v) { return v > 0.0 ? std::exp(-z2 / (v * v)) : 0.0; }, lo, hi, quad);
  return val / sqrt_2pi;
}

double cov_spacetime_closed(double t, double x, double s, double y) {
  require_time(t, "t");
  require_time(s, "s");
  const double z = x - y;
  const double lo = std::sqrt(std::abs(t - s));
  const double hi = std::sqrt(t + s);
  return (g_anti(hi, z) - g_anti(lo, z)) / sqrt_2pi;
}

double cov_space(double t, double x, double y, const QuadratureConfig& quad) {
  require_time(t, "t");
  require_finite(x, "x");
  require_finite(y, "y");
  if (t == 0.0) return 0.0;
  const double z = x - y;
  const double z2 = 0.25 * z * z;
  const double val = integrate_checked(
      [z2](double v) { return v > 0.0 ? std::exp(-z2 / (v * v)) : 0.0; }, 0.0,
      std::sqrt(t), quad);
  return val / sqrt_pi;
}

double cov_space_closed(double t, double x, double y) {
  require_time(t, "t");
  if (t == 0.0) return 0.0;
  const double d = std::abs(x - y);
  return std::sqrt(t / 3.14159265358979323846) * std::exp(-0.25 * d * d / t) -
         0.5 * d * std::erfc(0.5 * d / std::sqrt(t));
}

double tail_ratio(double t, double d, const QuadratureConfig& quad) {
  require_time(t, "t");
  require_finite(d, "d");
  if (t == 0.0) throw std::domain_error("tail ratio needs t > 0");
  d = std::abs(d);
  if (d == 0.0) return 1.0;
  // truncate the Gaussian tail where the integrand falls below 1e-18 absolutely
  const double hi = d + 13.0 * std::sqrt(t) + 1.0;
  const double inv4t = 0.25 / t;
  const double tail = integrate_checked(
      [inv4t](double r) { return std::exp(-inv4t * r * r); }, d, hi, quad);
  return std::exp(-inv4t * d * d) - 0.5 * d / t * tail;
}

double tail_ratio_closed(double t, double d) {
  require_time(t, "t");
  if (t == 0.0) throw std::domain_error("tail ratio needs t > 0");
  d = std::abs(d);
  const double st = std::sqrt(t);
  return std::exp(-0.25 * d * d / t) -
         0.5 * d * sqrt_pi / st * std::erfc(0.5 * d / st);
}

double delta_increment(double s, double t, double z, const QuadratureConfig& quad) {
  require_time(s, "s");
  require_time(t, "t");
  require_finite(z, "z");
  if (s > t) throw std::domain_error("delta increment needs s <= t");
  const double closed = std::sqrt(2.0 * t) + std::sqrt(2.0 * s) +
                        (2.0 - std::sqrt(2.0)) * std::sqrt(t - s) -
                        2.0 * std::sqrt(t + s);
  const double az = std::abs(z);
  if (az == 0.0 || s == 0.0) return closed;
  // exponential correction, substituted to a smooth integrand:
  //   2 Integral_{sqrt(t-s)}^{sqrt(t+s)} (1 - exp(-z^2/(2 v^2))) dv
  const double lo = std::sqrt(t - s);
  const double hi = std::sqrt(t + s);
  const double z2 = 0.5 * az * az;
  const double corr = integrate_checked(
      [z2](double v) {
        if (v <= 0.0) return 1.0;
        const double q = z2 / (v * v);
        return q < 1e-8 ? q * (1.0 - 0.5 * q) : 1.0 - std::exp(-q);
      },
      lo, hi, quad);
  return closed + 2.0 * corr;
}

double delta_increment_closed(double s, double t, double z) {
  require_time(s, "s");
  require_time(t, "t");
  if (s > t) throw std::domain_error("delta increment needs s <= t");
  const double closed = std::sqrt(2.0 * t) + std::sqrt(2.0 * s) +
                        (2.0 - std::sqrt(2.0)) * std::sqrt(t - s) -
                        2.0 * std::sqrt(t + s);
  const double az = std::abs(z);
  if (az == 0.0 || s == 0.0) return closed;
  const double a = az / std::sqrt(t + s);
  const double b = (t == s) ? std::numeric_limits<double>::infinity()
                            : az / std::sqrt(t - s);
  return closed + 2.0 * az * (p_anti(b) - p_anti(a));
}

double increment_second_moment(double t, double x, double s, double y,
                               const QuadratureConfig& quad) {
  require_time(t, "t");
  require_time(s, "s");
  require_finite(x, "x");
  require_finite(y, "y");
  if (t < s) {
    std::swap(t, s);
    std::swap(x, y);
  }
  return (std::sqrt(2.0 * (t - s)) + delta_increment(s, t, x - y, quad)) / sqrt_2pi;
}

Moments moments_time_pair(double t, double s) {
  require_time(t, "t");
  require_time(s, "s");
  if (s > t) throw std::domain_error("time pair needs s <= t");
  Moments m;
  m.sigma2_t = variance(t);
  m.sigma2_s = variance(s);
  m.mu = cov_time(t, s);
  if (s == 0.0 || s == t) {
    m.degenerate = true;
    m.rho2 = 0.0;
    return m;
  }
  // sigma2_t sigma2_s - mu^2 in a cancellation-free arrangement
  m.rho2 = (std::sqrt(t * s) - t + std::sqrt((t - s) * (t + s))) / 3.14159265358979323846;
  return m;
}

}  // namespace she::kernels
