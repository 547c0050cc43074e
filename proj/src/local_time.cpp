#include "she/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "she/common.hpp"
#include "she/estimators.hpp"

namespace she::lt {

namespace {

constexpr double pi = 3.14159265358979323846;

std::size_t snap_index(const PathView& p, double coord, const char* what) {
  if (!(p.step > 0.0)) throw ConfigError("path has no uniform step");
  const double off = (coord - p.origin) / p.step;
  const long j = std::lround(off);
  if (j < 0 || std::size_t(j) >= p.n || std::abs(off - double(j)) > 1e-6)
    throw ConfigError(std::string(what) + " does not lie on the path grid");
  return std::size_t(j);
}

void bandwidth_guard(const Mollifier& mol, double step) {
  // the kernel must span several path increments or the density estimate
  // collapses onto single grid values
  if (2.0 * mol.bandwidth() < 4.0 * std::sqrt(step))
    throw ConfigError("mollifier bandwidth too small for the path resolution");
}

}  // namespace

double Mollifier::operator()(double u) const {
  if (!(n > 0.0)) throw ConfigError("mollifier sharpness must be > 0");
  if (profile == Profile::gaussian) {
    const double s = 1.0 / n;
    const double z = u / s;
    return std::exp(-0.5 * z * z) / (s * sqrt_2pi);
  }
  const double v = n * u;  // support (0, 2)
  if (v <= 0.0 || v >= 2.0) return 0.0;
  const double d = (v - 1.0) * (v - 1.0) - 1.0;  // in [-1, 0)
  return n * bump_normalizer * std::exp(1.0 / d);
}

Histogram occupation_histogram(const PathView& w, double x, int bins, double lo, double hi) {
  if (bins < 1) throw ConfigError("needs bins >= 1");
  if (!(hi > lo)) throw ConfigError("needs hi > lo");
  const std::size_t ilo = snap_index(w, std::min(0.0, x), "window edge");
  const std::size_t ihi = snap_index(w, std::max(0.0, x), "window edge");
  Histogram h;
  double vmin = lo, vmax = hi;
  for (std::size_t i = ilo; i <= ihi; ++i) {
    vmin = std::min(vmin, w[i]);
    vmax = std::max(vmax, w[i]);
  }
  if (vmin < lo || vmax > hi) {
    h.extended = true;
    const double pad = (vmax - vmin) * 1e-9 + 1e-12;
    vmin -= pad;
    vmax += pad;
  }
  h.edges.resize(std::size_t(bins) + 1);
  for (int k = 0; k <= bins; ++k)
    h.edges[std::size_t(k)] = vmin + (vmax - vmin) * double(k) / double(bins);
  h.mass.assign(std::size_t(bins), 0.0);
  const double width = (vmax - vmin) / double(bins);
  for (std::size_t i = ilo; i <= ihi; ++i) {
    const double wgt = (i == ilo || i == ihi) ? 0.5 : 1.0;
    auto k = long(std::floor((w[i] - vmin) / width));
    k = std::clamp(k, 0l, long(bins) - 1);
    h.mass[std::size_t(k)] += wgt * w.step;
  }
  return h;
}

double local_time_space(const PathView& w, double a, double x, const Mollifier& mol) {
  bandwidth_guard(mol, w.step);
  const std::size_t ilo = snap_index(w, std::min(0.0, x), "window edge");
  const std::size_t ihi = snap_index(w, std::max(0.0, x), "window edge");
  double acc = 0.0;
  for (std::size_t i = ilo; i <= ihi; ++i) {
    const double term = mol(w[i] - a);
    acc += (i == ilo || i == ihi) ? 0.5 * term : term;
  }
  return acc * w.step;
}

double weighted_local_time_time(const PathView& b, double a, double t, const Mollifier& mol) {
  if (!(t >= 0.0)) throw std::domain_error("needs t >= 0");
  if (b.origin != 0.0) throw ConfigError("temporal path must start at time 0");
  bandwidth_guard(mol, b.step);
  if (t == 0.0) return 0.0;
  const std::size_t it = snap_index(b, t, "horizon");
  const auto raw = std::llround(2.0 * t / b.step);
  const auto nv = std::size_t(std::clamp<long long>(raw, 64, 65536));
  const double hv = std::sqrt(t) / double(nv);
  double acc = 0.0;
  for (std::size_t i = 0; i <= nv; ++i) {
    const double v = double(i) * hv;
    auto j = std::size_t(std::llround(v * v / b.step));
    if (j > it) j = it;
    const double term = mol(b[j] - a);
    acc += (i == 0 || i == nv) ? 0.5 * term : term;
  }
  return acc * hv / std::sqrt(pi);
}

namespace {

LocalTimeEstimate profile(const PathView& p, double arg, const Mollifier& mol,
                          int n_levels, bool temporal) {
  if (n_levels < 2) throw ConfigError("needs n_levels >= 2");
  LocalTimeEstimate e;
  e.bandwidth = mol.bandwidth();
  e.weight_kind = temporal ? "sqrt_clock" : "flat";
  std::size_t ilo, ihi;
  if (temporal) {
    ilo = 0;
    ihi = snap_index(p, arg, "horizon");
  } else {
    ilo = snap_index(p, std::min(0.0, arg), "window edge");
    ihi = snap_index(p, std::max(0.0, arg), "window edge");
  }
  double vmin = p[ilo], vmax = p[ilo];
  for (std::size_t i = ilo; i <= ihi; ++i) {
    vmin = std::min(vmin, p[i]);
    vmax = std::max(vmax, p[i]);
  }
  const double pad = 3.0 * mol.bandwidth();
  e.levels.resize(std::size_t(n_levels));
  for (int k = 0; k < n_levels; ++k)
    e.levels[std::size_t(k)] =
        vmin - pad + (vmax + pad - (vmin - pad)) * double(k) / double(n_levels - 1);
  e.mass.resize(std::size_t(n_levels));
  for (int k = 0; k < n_levels; ++k)
    e.mass[std::size_t(k)] = temporal
                                 ? weighted_local_time_time(p, e.levels[std::size_t(k)], arg, mol)
                                 : local_time_space(p, e.levels[std::size_t(k)], arg, mol);
  return e;
}

}  // namespace

LocalTimeEstimate local_time_profile_space(const PathView& w, double x,
                                           const Mollifier& mol, int n_levels) {
  return profile(w, x, mol, n_levels, false);
}

LocalTimeEstimate local_time_profile_time(const PathView& b, double t,
                                          const Mollifier& mol, int n_levels) {
  return profile(b, t, mol, n_levels, true);
}

void write_csv(const LocalTimeEstimate& e, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "a,mass,bandwidth,weight_kind,seed\n";
  char line[160];
  for (std::size_t i = 0; i < e.levels.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%s,%llu\n", e.levels[i],
                  e.mass[i], e.bandwidth, e.weight_kind.c_str(),
                  (unsigned long long)e.seed);
    out << line;
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

double bouleau_yor_residual(const fns::TestFunction& f, const PathView& w, double x,
                            double delta, const Mollifier& mol) {
  const double pqc = qcov::spatial_pqc(w, f, x, delta);
  const LocalTimeEstimate prof = local_time_profile_space(w, x, mol, 256);
  double stieltjes = 0.0;
  for (std::size_t k = 0; k + 1 < prof.levels.size(); ++k) {
    const double mid = 0.5 * (prof.levels[k] + prof.levels[k + 1]);
    stieltjes += f.eval(mid) * (prof.mass[k + 1] - prof.mass[k]);
  }
  return pqc + stieltjes;
}

TanakaSpace tanaka_residual_space(double a, const PathView& w, double x, double delta,
                                  const Mollifier& mol) {
  const std::size_t i0 = snap_index(w, 0.0, "window edge");
  const std::size_t ix = snap_index(w, x, "window edge");
  const double lt = local_time_space(w, a, x, mol);
  const auto above = fns::indicator_above(a);
  const auto upto = fns::indicator_upto(a);
  const auto pos = fns::relu(a);
  const auto neg = fns::negpart(a);
  TanakaSpace r;
  r.plus_part = pos.eval(w[ix]) - pos.eval(w[i0]) -
                qcov::forward_integral_space(w, above, x, delta) - 0.5 * lt;
  r.minus_part = neg.eval(w[ix]) - neg.eval(w[i0]) +
                 qcov::forward_integral_space(w, upto, x, delta) - 0.5 * lt;
  r.abs_part = r.plus_part + r.minus_part;
  return r;
}

double tanaka_residual_time(double a, const PathView& b, double t, double eps,
                            const Mollifier& mol) {
  const std::size_t i0 = snap_index(b, 0.0, "window edge");
  const std::size_t it = snap_index(b, t, "horizon");
  const auto sg = fns::sign_shift(a);
  const double fwd =
      qcov::forward_integral_time(b, sg, t, eps, mol.bandwidth());
  const double lt = weighted_local_time_time(b, a, t, mol);
  return std::abs(b[it] - a) - std::abs(b[i0] - a) - fwd - lt;
}

}  // namespace she::lt
