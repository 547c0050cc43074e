#include "she/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "she/common.hpp"

namespace she::norms {

namespace {

constexpr double pi = 3.14159265358979323846;

// half-width beyond which the weighted integrand is below ~1e-18 relatively,
// given the decay rate a_eff = a - 2 beta of f^2 times the Gaussian weight
double cutoff(double a_eff) {
  return std::sqrt(45.0 / a_eff) + 3.0;
}

}  // namespace

double growth_threshold(double t) {
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  return sqrt_pi / (4.0 * std::sqrt(t));
}

NormResult norm_Ht(const fns::TestFunction& f, double t, double x,
                   const QuadratureConfig& quad) {
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  if (!std::isfinite(x)) throw std::domain_error("x must be finite");
  NormResult r;
  if (f.beta >= growth_threshold(t)) {
    r.value = std::numeric_limits<double>::infinity();
    r.diverged = true;
    return r;
  }
  if (x == 0.0) return r;
  const double st = std::sqrt(t);
  const double a = sqrt_pi / (2.0 * st);
  const double zc = cutoff(a - 2.0 * f.beta);
  const auto& ev = f.eval;
  const double inner = integrate_checked(
      [&ev, st, a](double z) {
        const double fz = ev(z);
        return fz * fz * (st + z * z) * std::exp(-a * z * z);
      },
      -zc, zc, quad);
  r.value = std::sqrt(std::abs(x) * std::pow(4.0 * pi * t, -0.25) * inner);
  return r;
}

NormResult norm_Hstar(const fns::TestFunction& f, double T, const QuadratureConfig& quad) {
  if (!(T > 0.0)) throw std::domain_error("needs T > 0");
  NormResult r;
  if (f.beta >= growth_threshold(T)) {
    r.value = std::numeric_limits<double>::infinity();
    r.diverged = true;
    return r;
  }
  // relax the inner tolerance slightly; the outer integral sums many inners
  QuadratureConfig inner_cfg = quad;
  inner_cfg.rel_tol = std::max(quad.rel_tol * 0.1, 1e-13);
  inner_cfg.abs_tol = quad.abs_tol * 0.01;
  const auto& ev = f.eval;
  const double beta = f.beta;
  const auto inner = [&ev, beta, &inner_cfg](double v) {
    if (v <= 0.0) return 0.0;
    const double a = sqrt_pi / (2.0 * v * v);  // sqrt(s) = v^2
    const double zc = cutoff(a - 2.0 * beta);
    return integrate_checked(
        [&ev, a](double z) {
          const double fz = ev(z);
          return fz * fz * std::exp(-a * z * z);
        },
        -zc, zc, inner_cfg);
  };
  const double outer = integrate_checked(inner, 0.0, std::pow(T, 0.25), quad);
  r.value = std::sqrt(std::pow(4.0 * pi, -0.25) * 4.0 * outer);
  return r;
}

}  // namespace she::norms
