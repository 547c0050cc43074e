#include "she/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "she/common.hpp"
#include "she/kernels.hpp"

namespace she::qcov {

namespace {

std::size_t snap_index(const PathView& p, double coord, const char* what) {
  if (!(p.step > 0.0)) throw ConfigError("path has no uniform step");
  const double off = (coord - p.origin) / p.step;
  const long j = std::lround(off);
  if (j < 0 || std::size_t(j) >= p.n || std::abs(off - double(j)) > 1e-6)
    throw ConfigError(std::string(what) + " does not lie on the path grid");
  return std::size_t(j);
}

std::size_t snap_lag(double sep, double step) {
  if (!(sep > 0.0)) throw ConfigError("separation must be > 0");
  const long m = std::lround(sep / step);
  if (m < 1 || std::abs(double(m) * step - sep) > 1e-9 * sep)
    throw ConfigError("separation must be a positive multiple of the path step");
  return std::size_t(m);
}

void growth_guard(const fns::TestFunction& f, double t) {
  if (f.beta > 0.0 && f.beta >= sqrt_pi / (4.0 * std::sqrt(t)))
    throw std::domain_error("growth exponent of " + f.id +
                            " reaches the divergence threshold at t = " +
                            std::to_string(t));
}

// derivative for the compensator: exact when registered, otherwise a central
// difference at the mollification bandwidth
std::function<double(double)> comp_deriv(const fns::TestFunction& f, double h) {
  if (f.has_deriv()) return f.deriv;
  if (!(h > 0.0)) throw ConfigError("non-smooth " + f.id + " needs a mollification bandwidth");
  auto ev = f.eval;
  return [ev, h](double y) { return (ev(y + h) - ev(y - h)) / (2.0 * h); };
}

struct VClock {
  std::size_t nv;   // panels
  double hv;        // v spacing
};

VClock v_clock(const PathView& b, double t) {
  const auto raw = std::llround(2.0 * t / b.step);
  const auto nv = std::size_t(std::clamp<long long>(raw, 64, 65536));
  return {nv, std::sqrt(t) / double(nv)};
}

}  // namespace

void EpsilonSchedule::validate(double step) const {
  if (levels.empty()) throw ConfigError("schedule has no levels");
  for (double l : levels)
    if (!(l > 0.0)) throw ConfigError("schedule levels must be > 0");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] < levels[i - 1]))
      throw ConfigError("schedule levels must be strictly decreasing");
  if (step > 0.0 && levels.back() < 2.0 * step - 1e-12)
    throw ConfigError("finest level must be at least two path steps");
}

EpsilonSchedule dyadic_schedule(EpsilonSchedule::Kind kind, int coarse_pow2, int fine_pow2) {
  if (coarse_pow2 >= fine_pow2) throw ConfigError("dyadic schedule needs coarse < fine");
  EpsilonSchedule s;
  s.kind = kind;
  for (int p = coarse_pow2; p <= fine_pow2; ++p) s.levels.push_back(std::ldexp(1.0, -p));
  return s;
}

double spatial_pqc(const PathView& w, const fns::TestFunction& f, double x, double delta) {
  const std::size_t m = snap_lag(delta, w.step);
  const std::size_t lo = snap_index(w, std::min(0.0, x), "window edge");
  const std::size_t hi = snap_index(w, std::max(0.0, x), "window edge");
  if (lo == hi) return 0.0;
  if (hi + m >= w.n) throw ConfigError("path too short for the requested separation");
  double acc = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double dwi = w[i + m] - w[i];
    const double term = (f.eval(w[i + m]) - f.eval(w[i])) * dwi;
    acc += (i == lo || i == hi) ? 0.5 * term : term;
  }
  return acc * w.step / delta;
}

double spatial_qv(const PathView& w, double x, double delta) {
  return spatial_pqc(w, fns::identity(), x, delta);
}

double temporal_pqc(const PathView& b, const fns::TestFunction& f, double t, double eps) {
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  if (b.origin != 0.0) throw ConfigError("temporal path must start at time 0");
  growth_guard(f, t);
  const std::size_t me = snap_lag(eps, b.step);
  const std::size_t it = snap_index(b, t, "horizon");
  if (it + me >= b.n) throw ConfigError("path too short for the requested separation");
  const VClock vc = v_clock(b, t);
  double acc = 0.0;
  for (std::size_t i = 0; i <= vc.nv; ++i) {
    const double v = double(i) * vc.hv;
    auto j = std::size_t(std::llround(v * v / b.step));
    if (j > it) j = it;
    const double db = b[j + me] - b[j];
    const double term = (f.eval(b[j + me]) - f.eval(b[j])) * db;
    acc += (i == 0 || i == vc.nv) ? 0.5 * term : term;
  }
  return acc * vc.hv / std::sqrt(eps);
}

double temporal_qv(const PathView& b, double t, double eps) {
  return temporal_pqc(b, fns::identity(), t, eps);
}

double forward_integral_space(const PathView& w, const fns::TestFunction& f, double x,
                              double delta) {
  const std::size_t m = snap_lag(delta, w.step);
  const std::size_t i0 = snap_index(w, 0.0, "window edge");
  const std::size_t ix = snap_index(w, x, "window edge");
  if (i0 == ix) return 0.0;
  const std::size_t span = ix > i0 ? ix - i0 : i0 - ix;
  if (span % m != 0)
    throw ConfigError("window length must be a multiple of the separation");
  const std::size_t nsteps = span / m;
  double acc = 0.0;
  if (ix > i0) {
    for (std::size_t k = 0; k < nsteps; ++k) {
      const std::size_t i = i0 + k * m;
      acc += f.eval(w[i]) * (w[i + m] - w[i]);
    }
  } else {
    for (std::size_t k = 0; k < nsteps; ++k) {
      const std::size_t i = i0 - k * m;
      acc += f.eval(w[i]) * (w[i - m] - w[i]);
    }
  }
  return acc;
}

double forward_integral_time(const PathView& b, const fns::TestFunction& f, double t,
                             double eps, double comp_bandwidth) {
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  if (b.origin != 0.0) throw ConfigError("temporal path must start at time 0");
  growth_guard(f, t);
  const std::size_t me = snap_lag(eps, b.step);
  const std::size_t it = snap_index(b, t, "horizon");
  if (it + me >= b.n) throw ConfigError("path too short for the requested separation");
  const double h =
      comp_bandwidth > 0.0
          ? comp_bandwidth
          : std::max(std::sqrt(eps), 2.0 * std::sqrt(b.step));
  const auto fd = comp_deriv(f, h);
  double acc = 0.0;
  for (std::size_t j = 0; j <= it; ++j) {
    const double s = double(j) * b.step;
    const double corr =
        (std::sqrt(2.0 * s + eps) - std::sqrt(2.0 * s) - std::sqrt(eps)) / sqrt_2pi;
    const double term = f.eval(b[j]) * (b[j + me] - b[j]) - fd(b[j]) * corr;
    acc += (j == 0 || j == it) ? 0.5 * term : term;
  }
  return acc * b.step / eps;
}

double spatial_reference(const PathView& w, const fns::TestFunction& f, double x) {
  if (!f.has_deriv())
    throw std::domain_error(f.id + " has no registered derivative");
  const std::size_t lo = snap_index(w, std::min(0.0, x), "window edge");
  const std::size_t hi = snap_index(w, std::max(0.0, x), "window edge");
  double acc = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double term = f.deriv(w[i]);
    acc += (i == lo || i == hi) ? 0.5 * term : term;
  }
  return acc * w.step;
}

double temporal_reference(const PathView& b, const fns::TestFunction& f, double t) {
  if (!f.has_deriv())
    throw std::domain_error(f.id + " has no registered derivative");
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  if (b.origin != 0.0) throw ConfigError("temporal path must start at time 0");
  const std::size_t it = snap_index(b, t, "horizon");
  const VClock vc = v_clock(b, t);
  double acc = 0.0;
  for (std::size_t i = 0; i <= vc.nv; ++i) {
    const double v = double(i) * vc.hv;
    auto j = std::size_t(std::llround(v * v / b.step));
    if (j > it) j = it;
    const double term = f.deriv(b[j]);
    acc += (i == 0 || i == vc.nv) ? 0.5 * term : term;
  }
  return acc * vc.hv * sqrt_2_over_pi;
}

double ito_residual_space(const fns::TestFunction& f, const PathView& w, double x,
                          double delta) {
  if (!f.has_antideriv())
    throw std::domain_error(f.id + " has no registered antiderivative");
  const std::size_t i0 = snap_index(w, 0.0, "window edge");
  const std::size_t ix = snap_index(w, x, "window edge");
  const double big_f = f.antideriv(w[ix]) - f.antideriv(w[i0]);
  const double fwd = forward_integral_space(w, f, x, delta);
  const double pqc = spatial_pqc(w, f, x, delta);
  return big_f - fwd - 0.5 * pqc;
}

double ito_residual_time(const fns::TestFunction& f, const PathView& b, double t,
                         double eps, double comp_bandwidth) {
  if (!f.has_antideriv())
    throw std::domain_error(f.id + " has no registered antiderivative");
  const std::size_t i0 = snap_index(b, 0.0, "window edge");
  const std::size_t it = snap_index(b, t, "horizon");
  const double big_f = f.antideriv(b[it]) - f.antideriv(b[i0]);
  const double fwd = forward_integral_time(b, f, t, eps, comp_bandwidth);
  const double pqc = temporal_pqc(b, f, t, eps);
  return big_f - fwd - pqc / (2.0 * std::sqrt(2.0));
}

double qv_bias_space(double t, double eps) {
  if (!(t > 0.0) || !(eps > 0.0)) throw std::domain_error("needs t > 0, eps > 0");
  return kernels::delta_increment_closed(t, t, eps) / sqrt_2pi - eps;
}

double qv_bias_time(double s, double eps) {
  if (!(s >= 0.0) || !(eps > 0.0)) throw std::domain_error("needs s >= 0, eps > 0");
  return (std::sqrt(2.0 * (s + eps)) - 2.0 * std::sqrt(2.0 * s + eps) +
          std::sqrt(2.0 * s)) /
         sqrt_2pi;
}

void write_csv(const std::vector<EstimatorOutput>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "kind,f_id,level,value,reference,gap,seed,replicate\n";
  char line[256];
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.levels.size(); ++i) {
      std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%.17g,%.17g,%llu,%d\n",
                    r.kind.c_str(), r.f_id.c_str(), r.levels[i], r.values[i],
                    r.reference, r.gaps.size() > i ? r.gaps[i] : 0.0,
                    (unsigned long long)r.seed, r.replicate);
      out << line;
    }
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace she::qcov
