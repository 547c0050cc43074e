#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "she/functions.hpp"
#include "she/grid.hpp"

namespace she::qcov {

struct EpsilonSchedule {
  std::vector<double> levels;  // strictly decreasing
  enum class Kind { spatial, temporal } kind = Kind::spatial;
  // throws ConfigError unless strictly decreasing and finest >= 2 * step
  void validate(double step) const;
};

EpsilonSchedule dyadic_schedule(EpsilonSchedule::Kind kind, int coarse_pow2, int fine_pow2);

// Spatial pointwise quadratic covariation estimate at spacing delta over the
// window from 0 to x: trapezoid in y of {f(W_{y+delta}) - f(W_y)} (W_{y+delta} - W_y),
// divided by delta. The path must cover [min(0,x), max(0,x) + delta].
double spatial_pqc(const PathView& w, const fns::TestFunction& f, double x, double delta);
double spatial_qv(const PathView& w, double x, double delta);  // f = identity

// Temporal estimate at separation eps over [0, t], evaluated on the
// square-root clock s = v^2 so the singular density at s = 0 integrates
// exactly: (1/sqrt(eps)) Integral_0^sqrt(t) {f(B_{v^2+eps}) - f(B_{v^2})}
// (B_{v^2+eps} - B_{v^2}) dv.
double temporal_pqc(const PathView& b, const fns::TestFunction& f, double t, double eps);
double temporal_qv(const PathView& b, double t, double eps);

// plain forward (Riemann left-point) integral of f along the spatial path
double forward_integral_space(const PathView& w, const fns::TestFunction& f, double x,
                              double delta);

// Temporal forward integral with the diverging small-scale part removed by its
// exact covariance compensator; comp_bandwidth mollifies the derivative of a
// non-smooth f (0 picks max(sqrt(eps), 2 sqrt(step))).
double forward_integral_time(const PathView& b, const fns::TestFunction& f, double t,
                             double eps, double comp_bandwidth = 0.0);

// limit targets of the change-of-variable identities
double spatial_reference(const PathView& w, const fns::TestFunction& f, double x);
double temporal_reference(const PathView& b, const fns::TestFunction& f, double t);

// F(W_x) - F(W_0) - forward integral - (1/2) spatial pqc, F the antiderivative
double ito_residual_space(const fns::TestFunction& f, const PathView& w, double x,
                          double delta);
// F(B_t) - F(B_0) - compensated forward integral - (1/(2 sqrt(2))) temporal pqc
double ito_residual_time(const fns::TestFunction& f, const PathView& b, double t,
                         double eps, double comp_bandwidth = 0.0);

// exact small-eps bias of the quadratic variation estimators
double qv_bias_space(double t, double eps);
double qv_bias_time(double s, double eps);

struct EstimatorOutput {
  std::string kind;  // "spatial_pqc", "temporal_qv", ...
  std::string f_id;
  std::vector<double> levels;
  std::vector<double> values;
  std::vector<double> gaps;  // |value - reference| per level
  double reference = 0.0;
  std::uint64_t seed = 0;
  int replicate = 0;
};

void write_csv(const std::vector<EstimatorOutput>& rows, const std::string& path);

}  // namespace she::qcov
