// Runs the eleven shipping checks end to end with every tolerance pinned in
// code. One verdict line per check, clause detail beneath, progress on stderr.
// Exit code = number of failing checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "she/common.hpp"
#include "she/estimators.hpp"
#include "she/fd.hpp"
#include "she/functions.hpp"
#include "she/grid.hpp"
#include "she/harness.hpp"
#include "she/kernels.hpp"
#include "she/lemmas.hpp"
#include "she/local_time.hpp"
#include "she/norms.hpp"
#include "she/sampler.hpp"
#include "she/stats.hpp"

using namespace she;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void note(const std::string& s) {
  std::fprintf(stderr, "[acceptance] %s\n", s.c_str());
  std::fflush(stderr);
}

struct Clause {
  bool pass;
  std::string text;
};

struct Verdict {
  std::string id;
  std::string title;
  double seconds = 0.0;
  std::vector<Clause> clauses;
  bool pass() const {
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int trend_violations(const std::vector<double>& m) {
  int v = 0;
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] > m[i - 1]) ++v;
  return v;
}

double window_median(const PathView& w, double hi_coord) {
  std::vector<double> vals;
  const std::size_t ix = std::size_t(std::llround(hi_coord / w.step));
  for (std::size_t i = 0; i <= ix; ++i) vals.push_back(w[i]);
  return stats::median(vals);
}

// per-level mean of |residual(path, level)| across an ensemble
template <class Fn>
std::vector<double> abs_means(const std::vector<FieldSample>& draws, int n, bool temporal,
                              const std::vector<double>& levels, Fn&& residual) {
  std::vector<double> out;
  for (double lv : levels) {
    std::vector<double> av;
    av.reserve(std::size_t(n));
    for (int r = 0; r < n; ++r) {
      const PathView p = temporal ? slice_time(draws[std::size_t(r)], 0)
                                  : slice_space(draws[std::size_t(r)], 0);
      av.push_back(std::abs(residual(p, lv)));
    }
    out.push_back(stats::mc_aggregate(av).mean);
  }
  return out;
}

}  // namespace

int main() {
  const QuadratureConfig quad{};
  std::vector<Verdict> table;
  auto verdict = [&table](const std::string& id, const std::string& title) -> Verdict& {
    for (auto& v : table)
      if (v.id == id) return v;
    table.push_back({id, title, 0.0, {}});
    return table.back();
  };

  // ---- C1: deterministic small-scale increment ratios -----------------------
  {
    Stopwatch sw;
    auto& v = verdict("C1", "analytic increment scaling, both axes");
    const auto sp = harness::scaling_limit_check(harness::ScalingKind::space, 1.0, 0.0,
                                                 {std::ldexp(1.0, -8)}, quad);
    const auto tm = harness::scaling_limit_check(harness::ScalingKind::time, 1.0, 0.0,
                                                 {std::ldexp(1.0, -12)}, quad);
    const double rs = sp.rows.back().ratio;
    const double rt = tm.rows.back().ratio;
    v.clauses.push_back({rs >= 0.99 && rs <= 1.01,
                         fmt("space increment ratio %.5f in [0.99, 1.01] at 2^-8", rs)});
    v.clauses.push_back(
        {rt >= 0.99 && rt <= 1.01,
         fmt("time increment ratio %.5f in [0.99, 1.01] at 2^-12", rt)});
    v.seconds = sw.lap();
    v.clauses.push_back({v.seconds < 1.0, fmt("runtime %.2f s < 1 s", v.seconds)});
    note(fmt("C1 done in %.2f s", v.seconds));
  }

  // ---- C2: diagonal limits depend on the approach path ----------------------
  {
    Stopwatch sw;
    auto& v = verdict("C2", "no joint small-scale limit along parabolas");
    std::vector<double> levels;
    for (int p = 4; p <= 8; ++p) levels.push_back(std::ldexp(1.0, -p));
    const auto joint =
        harness::scaling_limit_check(harness::ScalingKind::joint, 1.0, 0.0, levels, quad);
    double lo = 1e300, hi = -1e300;
    for (const auto& r : joint.rows)
      if (r.level == levels.back()) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
      }
    const double spread = hi / lo - 1.0;
    v.clauses.push_back(
        {spread > 0.05,
         fmt("normalized ratios at 2^-8 spread %.1f%% > 5%% across k in {0.5, 1, 2}",
             100.0 * spread)});
    v.seconds = sw.lap();
    v.clauses.push_back({v.seconds < 1.0, fmt("runtime %.2f s < 1 s", v.seconds)});
    note(fmt("C2 done in %.2f s", v.seconds));
  }

  // ---- C3: sampled fields match the covariance they were built from ---------
  {
    Stopwatch sw;
    auto& v = verdict("C3", "sampler covariance fidelity on a 6x6 grid");
    std::vector<double> times, spaces;
    for (int i = 0; i < 6; ++i) {
      times.push_back(0.1 + 0.18 * i);
      spaces.push_back(0.2 * i);
    }
    const FieldGrid g = rect_grid(times, spaces);
    const int n = 2000;
    const auto draws = sampler::sample_field(g, n, 33, quad);
    const std::size_t N = g.points();
    std::vector<double> exact(N * N);
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p; q < N; ++q) {
        const kernels::CovQuery cq{g.times[p / 6], g.spaces[p % 6], g.times[q / 6],
                                   g.spaces[q % 6]};
        exact[p * N + q] = kernels::cov_spacetime(cq, quad);
      }
    double worst = 0.0;
    int entries = 0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p; q < N; ++q) {
        double acc = 0.0;
        for (const auto& s : draws) acc += s.values[p] * s.values[q];
        const double emp = acc / double(n);
        const double cpp = exact[p * N + p], cqq = exact[q * N + q];
        const double cpq = exact[p * N + q];
        const double se = std::sqrt((cpp * cqq + cpq * cpq) / double(n));
        worst = std::max(worst, std::abs(emp - cpq) / se);
        ++entries;
      }
    v.clauses.push_back({worst <= 5.0, fmt("all %d covariance entries within 5 se of "
                                           "the kernel (worst %.2f se), n = 2000",
                                           entries, worst)});
    v.seconds = sw.lap();
    v.clauses.push_back({v.seconds < 60.0, fmt("runtime %.1f s < 60 s", v.seconds)});
    note(fmt("C3 done in %.1f s", v.seconds));
  }

  // ---- spatial ensemble shared by C5, C7, C8, C9, C11 -----------------------
  note("building spatial ensemble: t = 1, dx = 2^-12, n = 100");
  Stopwatch sw5;
  const double dx = std::ldexp(1.0, -12);
  const FieldGrid sgrid = space_slice_grid(1.0, 0.0, 1.0 + std::ldexp(1.0, -4), dx);
  const auto space = sampler::sample_field(sgrid, 100, 1001, quad);
  const double build_space_s = sw5.lap();
  note(fmt("spatial ensemble ready in %.1f s (%zu points)", build_space_s,
           sgrid.points()));

  // ---- C5: spatial quadratic variation recovers the window length -----------
  {
    auto& v = verdict("C5", "spatial quadratic variation at t = 1");
    std::vector<double> levels;
    for (int p = 4; p <= 9; ++p) levels.push_back(std::ldexp(1.0, -p));
    std::vector<std::vector<double>> per_level(levels.size());
    for (int r = 0; r < 100; ++r) {
      const PathView w = slice_space(space[std::size_t(r)], 0);
      for (std::size_t l = 0; l < levels.size(); ++l)
        per_level[l].push_back(qcov::spatial_qv(w, 1.0, levels[l]));
    }
    const double finest_mean = stats::mc_aggregate(per_level.back()).mean;
    std::vector<double> gap_means;
    for (auto& lv : per_level) {
      for (auto& g : lv) g = std::abs(g - 1.0);
      gap_means.push_back(stats::mc_aggregate(lv).mean);
    }
    const auto fit = stats::rate_fit(levels, gap_means);
    v.clauses.push_back({finest_mean >= 0.95 && finest_mean <= 1.05,
                         fmt("replicate-mean estimate %.4f in [0.95, 1.05] at 2^-9",
                             finest_mean)});
    v.clauses.push_back(
        {fit.alpha > 0.0, fmt("fitted gap exponent %.3f > 0", fit.alpha)});
    v.clauses.push_back({fit.r2 >= 0.8, fmt("log-log fit R^2 %.3f >= 0.8", fit.r2)});
    v.seconds = sw5.lap();
    v.clauses.push_back({v.seconds < 120.0,
                         fmt("runtime %.1f s < 120 s (ensemble build included)",
                             v.seconds)});
    note(fmt("C5 done in %.1f s", v.seconds));
  }

  // ---- C7 (space half): smooth-integrand limits hit their references --------
  {
    Stopwatch sw;
    auto& v = verdict("C7", "smooth-integrand covariation vs references");
    const double fine = std::ldexp(1.0, -9);
    for (const auto& f : {fns::sine(), fns::square()}) {
      double gap = 0.0, ref = 0.0;
      for (int r = 0; r < 100; ++r) {
        const PathView w = slice_space(space[std::size_t(r)], 0);
        const double est = qcov::spatial_pqc(w, f, 1.0, fine);
        const double tgt = qcov::spatial_reference(w, f, 1.0);
        gap += std::abs(est - tgt);
        ref += std::abs(tgt);
      }
      const double rel = gap / ref;
      v.clauses.push_back({rel <= 0.10, fmt("space f = %s: mean relative gap %.1f%% "
                                            "<= 10%% at 2^-9",
                                            f.id.c_str(), 100.0 * rel)});
    }
    v.seconds += sw.lap();
    note(fmt("C7 space half done in %.1f s", sw.lap()));
  }

  // ---- C8 (space half): change-of-variable residuals ------------------------
  {
    Stopwatch sw;
    auto& v = verdict("C8", "change-of-variable residuals, both axes");
    std::vector<double> levels;
    for (int p = 4; p <= 11; ++p) levels.push_back(std::ldexp(1.0, -p));
    const auto quad_means =
        abs_means(space, 100, false, levels, [](const PathView& w, double lv) {
          return qcov::ito_residual_space(fns::identity(), w, 1.0, lv);
        });
    const auto tan_means =
        abs_means(space, 100, false, levels, [](const PathView& w, double lv) {
          return qcov::ito_residual_space(fns::indicator_above(window_median(w, 1.0)), w,
                                          1.0, lv);
        });
    const int qv_viol = trend_violations(quad_means);
    const int tan_viol = trend_violations(tan_means);
    v.clauses.push_back({quad_means.back() <= 0.05,
                         fmt("space quadratic: mean |residual| %.4f <= 0.05 at 2^-11",
                             quad_means.back())});
    v.clauses.push_back(
        {qv_viol <= 1, fmt("space quadratic: %d trend violations <= 1 over 2^-4..-11",
                           qv_viol)});
    v.clauses.push_back(
        {tan_means.back() <= 0.10,
         fmt("space positive-part: mean |residual| %.4f <= 0.1 at 2^-11 (a = path "
             "median)",
             tan_means.back())});
    v.clauses.push_back(
        {tan_viol <= 1,
         fmt("space positive-part: %d trend violations <= 1", tan_viol)});
    v.seconds += sw.lap();
    note(fmt("C8 space half done in %.1f s", sw.lap()));
  }

  // ---- C9 (space half): indicator covariation against local time ------------
  {
    Stopwatch sw;
    auto& v = verdict("C9", "indicator covariation + local-time masses");
    const auto ind = fns::indicator(-0.3, 0.3);
    const lt::Mollifier sharp{32.0, lt::Mollifier::Profile::gaussian};
    const lt::Mollifier mass_kernel{16.0, lt::Mollifier::Profile::bump};
    std::vector<double> res;
    double worst_mass = 0.0;
    for (int r = 0; r < 100; ++r) {
      const PathView w = slice_space(space[std::size_t(r)], 0);
      res.push_back(std::abs(
          lt::bouleau_yor_residual(ind, w, 1.0, std::ldexp(1.0, -9), sharp)));
      const auto prof = lt::local_time_profile_space(w, 1.0, mass_kernel, 256);
      double mass = 0.0;
      for (std::size_t k = 0; k + 1 < prof.levels.size(); ++k)
        mass += 0.5 * (prof.mass[k] + prof.mass[k + 1]) *
                (prof.levels[k + 1] - prof.levels[k]);
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    const double mean_res = stats::mc_aggregate(res).mean;
    v.clauses.push_back(
        {mean_res <= 0.10,
         fmt("mean |indicator covariation + level integral| %.4f <= 0.1 at 2^-9 "
             "(gaussian kernel, h = 1/32)",
             mean_res)});
    v.clauses.push_back(
        {worst_mass <= 0.01,
         fmt("flat occupation mass 1 within 1%% per path (worst %.4f)", worst_mass)});
    v.seconds += sw.lap();
    note(fmt("C9 space half done in %.1f s", sw.lap()));
  }

  // ---- C11: second moments dominated by the weighted norm -------------------
  {
    Stopwatch sw;
    auto& v = verdict("C11", "one constant dominates all registry functions");
    const double fine = std::ldexp(1.0, -9);
    // n = 100 leaves the worst ratio within one standard error of the 3K line;
    // draw a dedicated 2000-replicate ensemble so the verdict is a measurement,
    // not a seed flip
    const int n11 = 2000;
    note(fmt("C11: drawing %d replicates for the moment/norm ratio table", n11));
    const auto field11 = sampler::sample_field(sgrid, n11, 1001, quad);
    std::vector<fns::TestFunction> registry;
    registry.push_back(fns::constant(1.0));
    registry.push_back(fns::identity());
    registry.push_back(fns::square());
    registry.push_back(fns::cube());
    registry.push_back(fns::sine());
    registry.push_back(fns::indicator(-0.3, 0.3));
    registry.push_back(fns::indicator_above(0.0));
    registry.push_back(fns::indicator_upto(0.0));
    registry.push_back(fns::relu(0.0));
    registry.push_back(fns::negpart(0.0));
    registry.push_back(fns::sign_shift(0.0));
    registry.push_back(fns::gauss_growth(0.2));
    std::vector<double> ratios;
    std::string worst_id = "?";
    double worst_ratio = 0.0, worst_se = 0.0;
    for (const auto& f : registry) {
      const auto norm = norms::norm_Ht(f, 1.0, 1.0, quad);
      if (norm.diverged) continue;
      std::vector<double> sq(static_cast<std::size_t>(n11));
      for (int r = 0; r < n11; ++r) {
        const PathView w = slice_space(field11[std::size_t(r)], 0);
        const double est = qcov::spatial_pqc(w, f, 1.0, fine);
        sq[std::size_t(r)] = est * est;
      }
      const auto agg = stats::mc_aggregate(sq);
      const double n2 = norm.value * norm.value;
      const double ratio = agg.mean / n2;
      note(fmt("C11 ratio %-32s %.3f +- %.3f", f.id.c_str(), ratio,
               agg.std_err / n2));
      if (ratio > 0.0) ratios.push_back(ratio);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_se = agg.std_err / n2;
        worst_id = f.id;
      }
    }
    const double K = stats::median(ratios);
    v.clauses.push_back(
        {worst_ratio <= 3.0 * K,
         fmt("max moment/norm ratio %.3f +- %.3f (f = %s) <= 3x fitted K = %.3f "
             "(K = %.3f, median of %zu functions, n = %d)",
             worst_ratio, worst_se, worst_id.c_str(), 3.0 * K, K, ratios.size(),
             n11)});
    v.seconds = sw.lap();
    note(fmt("C11 done in %.1f s", v.seconds));
  }

  // ---- temporal ensemble shared by C6, C7, C8, C9 ---------------------------
  {
    note("building temporal ensemble: dt = 2^-14, n = 200");
    Stopwatch sw6;
    const double dt = std::ldexp(1.0, -14);
    const FieldGrid tgrid = time_slice_grid(0.0, 1.0 + std::ldexp(1.0, -5), dt);
    auto tdraws = sampler::sample_field(tgrid, 200, 1002, quad);
    const double build_time_s = sw6.lap();
    note(fmt("temporal ensemble ready in %.1f s (%zu points)", build_time_s,
             tgrid.points()));

    std::vector<double> levels;
    for (int p = 5; p <= 10; ++p) levels.push_back(std::ldexp(1.0, -p));

    // C6: temporal quadratic variation
    {
      auto& v = verdict("C6", "temporal quadratic variation at t = 1");
      std::vector<double> finest;
      for (int r = 0; r < 200; ++r)
        finest.push_back(
            qcov::temporal_qv(slice_time(tdraws[std::size_t(r)], 0), 1.0, levels.back()));
      const double mean = stats::mc_aggregate(finest).mean;
      const double ratio = mean / sqrt_2_over_pi;
      v.clauses.push_back(
          {ratio >= 0.94 && ratio <= 1.06,
           fmt("replicate-mean estimate %.4f = %.4f x sqrt(2/pi), ratio in "
               "[0.94, 1.06] at 2^-10",
               mean, ratio)});
      v.seconds = sw6.lap();
      v.clauses.push_back({v.seconds < 180.0,
                           fmt("runtime %.1f s < 180 s (ensemble build included)",
                               v.seconds)});
      note(fmt("C6 done in %.1f s", v.seconds));
    }

    // C7 (time half)
    {
      Stopwatch sw;
      auto& v = verdict("C7", "");
      for (const auto& f : {fns::sine(), fns::square()}) {
        double gap = 0.0, ref = 0.0;
        for (int r = 0; r < 100; ++r) {
          const PathView b = slice_time(tdraws[std::size_t(r)], 0);
          const double est = qcov::temporal_pqc(b, f, 1.0, levels.back());
          const double tgt = qcov::temporal_reference(b, f, 1.0);
          gap += std::abs(est - tgt);
          ref += std::abs(tgt);
        }
        const double rel = gap / ref;
        v.clauses.push_back({rel <= 0.10, fmt("time f = %s: mean relative gap %.1f%% "
                                              "<= 10%% at 2^-10",
                                              f.id.c_str(), 100.0 * rel)});
      }
      v.seconds += sw.lap();
      const double total = v.seconds;
      v.clauses.push_back({total < 180.0,
                           fmt("runtime %.1f s < 180 s (both axes, sweeps only)",
                               total)});
      note(fmt("C7 done, %.1f s total", total));
    }

    // C8 (time half)
    {
      Stopwatch sw;
      auto& v = verdict("C8", "");
      const auto quad_means =
          abs_means(tdraws, 100, true, levels, [](const PathView& b, double lv) {
            return qcov::ito_residual_time(fns::identity(), b, 1.0, lv);
          });
      const auto tan_means =
          abs_means(tdraws, 100, true, levels, [](const PathView& b, double lv) {
            return qcov::ito_residual_time(fns::indicator_above(0.0), b, 1.0, lv);
          });
      const int qv_viol = trend_violations(quad_means);
      const int tan_viol = trend_violations(tan_means);
      v.clauses.push_back({quad_means.back() <= 0.05,
                           fmt("time quadratic: mean |residual| %.4f <= 0.05 at 2^-10",
                               quad_means.back())});
      v.clauses.push_back(
          {qv_viol <= 1,
           fmt("time quadratic: %d trend violations <= 1 over 2^-5..-10", qv_viol)});
      v.clauses.push_back({tan_means.back() <= 0.10,
                           fmt("time positive-part: mean |residual| %.4f <= 0.1 at "
                               "2^-10 (a = 0)",
                               tan_means.back())});
      v.clauses.push_back(
          {tan_viol <= 1,
           fmt("time positive-part: %d trend violations <= 1", tan_viol)});
      v.seconds += sw.lap();
      note(fmt("C8 time half done in %.1f s", sw.lap()));
    }

    // C9 (time half): weighted occupation mass
    {
      Stopwatch sw;
      auto& v = verdict("C9", "");
      const lt::Mollifier mass_kernel{16.0, lt::Mollifier::Profile::bump};
      double worst = 0.0;
      const double target = 1.0 / sqrt_pi;
      for (int r = 0; r < 100; ++r) {
        const PathView b = slice_time(tdraws[std::size_t(r)], 0);
        const auto prof = lt::local_time_profile_time(b, 1.0, mass_kernel, 256);
        double mass = 0.0;
        for (std::size_t k = 0; k + 1 < prof.levels.size(); ++k)
          mass += 0.5 * (prof.mass[k] + prof.mass[k + 1]) *
                  (prof.levels[k + 1] - prof.levels[k]);
        worst = std::max(worst, std::abs(mass / target - 1.0));
      }
      v.clauses.push_back({worst <= 0.01,
                           fmt("weighted occupation mass 1/sqrt(pi) within 1%% per "
                               "path (worst %.4f)",
                               worst)});
      v.seconds += sw.lap();
      note(fmt("C9 time half done in %.1f s", sw.lap()));
    }
  }

  // ---- C10: randomized bound sweep over the kernel inequalities -------------
  {
    Stopwatch sw;
    auto& v = verdict("C10", "kernel bound sweep, printed and fitted constants");
    const auto sweep = lemmas::bound_sweep(1, 10000, quad);
    for (const auto& st : sweep.checks) {
      if (st.fixed_constant) {
        v.clauses.push_back(
            {st.pass_rate == 1.0,
             fmt("%s: printed-constant pass rate %.2f%% (audited constant %.2f%%)",
                 st.name.c_str(), 100.0 * st.pass_rate,
                 100.0 * st.pass_rate_corrected)});
      } else {
        v.clauses.push_back(
            {st.stability <= 0.5,
             fmt("%s: fitted constant stable within %.0f%% <= 50%% across scales",
                 st.name.c_str(), 100.0 * st.stability)});
      }
    }
    v.seconds = sw.lap();
    v.clauses.push_back({v.seconds < 120.0, fmt("runtime %.1f s < 120 s", v.seconds)});
    note(fmt("C10 done in %.1f s", v.seconds));
  }

  // ---- C4: independent integrator reproduces the moments --------------------
  {
    Stopwatch sw;
    auto& v = verdict("C4", "independent integrator agreement");
    note("C4: integrating 4000 replicates at dx = 1/128 (long)");
    const double fdx = 1.0 / 128.0, fdt = fdx * fdx / 2.0;
    FieldGrid g = rect_grid({0.5, 1.0}, {0.0});
    g.dx = fdx;
    g.dt = fdt;
    const auto runs = fd::fd_integrate(g, 4000, 77);
    double var_acc = 0.0, cov_acc = 0.0;
    for (const auto& s : runs) {
      var_acc += s.values[1] * s.values[1];
      cov_acc += s.values[1] * s.values[0];
    }
    const double var_emp = var_acc / double(runs.size());
    const double cov_emp = cov_acc / double(runs.size());
    const double var_exact = kernels::variance(1.0);
    const double cov_exact = kernels::cov_time(1.0, 0.5);
    const double var_err = std::abs(var_emp / var_exact - 1.0);
    const double cov_err = std::abs(cov_emp / cov_exact - 1.0);
    v.clauses.push_back({var_err <= 0.05,
                         fmt("variance at t = 1: %.4f vs %.4f (%.2f%% <= 5%%)", var_emp,
                             var_exact, 100.0 * var_err)});
    v.clauses.push_back({cov_err <= 0.05,
                         fmt("time covariance (1, 0.5): %.4f vs %.4f (%.2f%% <= 5%%)",
                             cov_emp, cov_exact, 100.0 * cov_err)});
    v.seconds = sw.lap();
    v.clauses.push_back({v.seconds < 300.0, fmt("runtime %.0f s < 300 s", v.seconds)});
    note(fmt("C4 done in %.0f s", v.seconds));
  }

  // ---- verdict table --------------------------------------------------------
  const char* order[] = {"C1", "C2", "C3", "C4", "C5", "C6",
                         "C7", "C8", "C9", "C10", "C11"};
  int failed = 0;
  std::printf("\n");
  for (const char* id : order) {
    for (const auto& v : table) {
      if (v.id != id) continue;
      const bool ok = v.pass();
      if (!ok) ++failed;
      std::printf("%-4s %s  %s  (%.1f s)\n", v.id.c_str(), ok ? "PASS" : "FAIL",
                  v.title.c_str(), v.seconds);
      for (const auto& c : v.clauses)
        std::printf("       %s  %s\n", c.pass ? "ok  " : "FAIL", c.text.c_str());
    }
  }
  std::printf("\n%d of 11 checks pass\n", 11 - failed);
  std::fflush(stdout);
  return failed;
}
