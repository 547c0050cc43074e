#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "she/functions.hpp"
#include "she/grid.hpp"

namespace she::lt {

// Unit-mass kernel at sharpness n. The bump profile is supported on (0, 2/n)
// (one-sided, mean offset 1/n); the gaussian profile is centered with
// sigma = 1/n. Both have bandwidth 1/n.
struct Mollifier {
  double n = 16.0;
  enum class Profile { bump, gaussian } profile = Profile::bump;
  double operator()(double u) const;
  double bandwidth() const { return 1.0 / n; }
};

// 1 / Integral_0^2 exp(1/((u-1)^2 - 1)) du, pinned ahead of the build and
// re-derived by quadrature in the unit tests
inline constexpr double bump_normalizer = 2.252283621043869;

struct Histogram {
  std::vector<double> edges;  // bins+1 ascending
  std::vector<double> mass;   // occupation measure per bin, sums to |x|
  bool extended = false;      // range was widened to cover the path
};

// occupation measure of the spatial path over the window from 0 to x
Histogram occupation_histogram(const PathView& w, double x, int bins, double lo, double hi);

// mollified occupation density Integral_window zeta_n(W_y - a) dy
double local_time_space(const PathView& w, double a, double x, const Mollifier& mol);

// weighted occupation density on the sqrt clock:
//   (1/sqrt(pi)) Integral_0^sqrt(t) zeta_n(B_{v^2} - a) dv
double weighted_local_time_time(const PathView& b, double a, double t, const Mollifier& mol);

struct LocalTimeEstimate {
  std::vector<double> levels;  // the a grid
  std::vector<double> mass;    // density estimate per level
  double bandwidth = 0.0;
  std::string weight_kind;  // "flat" (spatial) or "sqrt_clock" (temporal)
  std::uint64_t seed = 0;
};

LocalTimeEstimate local_time_profile_space(const PathView& w, double x,
                                           const Mollifier& mol, int n_levels = 256);
LocalTimeEstimate local_time_profile_time(const PathView& b, double t,
                                          const Mollifier& mol, int n_levels = 256);

void write_csv(const LocalTimeEstimate& e, const std::string& path);

// spatial pqc of f plus the midpoint Stieltjes integral of f against the
// local-time profile; the two limits cancel
double bouleau_yor_residual(const fns::TestFunction& f, const PathView& w, double x,
                            double delta, const Mollifier& mol);

struct TanakaSpace {
  double plus_part = 0.0;   // (W - a)^+ identity residual
  double minus_part = 0.0;  // (W - a)^- identity residual
  double abs_part = 0.0;    // their sum, the |W - a| identity residual
};

TanakaSpace tanaka_residual_space(double a, const PathView& w, double x, double delta,
                                  const Mollifier& mol);

// |B_t - a| - |a| - compensated forward integral of sign(. - a) - weighted local time
double tanaka_residual_time(double a, const PathView& b, double t, double eps,
                            const Mollifier& mol);

}  // namespace she::lt
