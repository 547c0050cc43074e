#include "she/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "she/common.hpp"
#include "she/estimators.hpp"
#include "she/fd.hpp"
#include "she/functions.hpp"
#include "she/grid.hpp"
#include "she/kernels.hpp"
#include "she/lemmas.hpp"
#include "she/local_time.hpp"
#include "she/norms.hpp"
#include "she/sampler.hpp"
#include "she/stats.hpp"

namespace she::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::atomic<bool> g_interrupt{false};

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, 64);
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) {
      if (g_interrupt.load(std::memory_order_relaxed)) break;
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n || g_interrupt.load(std::memory_order_relaxed)) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!first_error) first_error = std::current_exception();
          g_interrupt.store(true);
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) {
    g_interrupt.store(false);
    std::rethrow_exception(first_error);
  }
}

CriterionLine crit(const std::string& id, double value, double target, double tol,
                   bool pass) {
  return CriterionLine{id, value, target, tol, pass};
}

CriterionLine crit_abs(const std::string& id, double value, double target, double tol) {
  return crit(id, value, target, tol, std::abs(value - target) <= tol);
}

struct Common {
  std::string kind, out_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  QuadratureConfig quad;
};

Common parse_common(const cfg::KvConfig& c) {
  Common m;
  m.kind = c.get("kind", "");
  if (m.kind.empty()) throw ConfigError("missing key: kind");
  m.out_dir = c.get("out_dir", "");
  m.seed = c.get_u64("seed", 1);
  m.threads = c.get_int("threads", 1);
  if (m.threads < 1) throw ConfigError("threads must be >= 1");
  m.quad.rel_tol = c.get_double("quad.rel_tol", 1e-10);
  m.quad.abs_tol = c.get_double("quad.abs_tol", 1e-12);
  m.quad.max_subdivisions = c.get_int("quad.max_subdivisions", 2048);
  if (!(m.quad.rel_tol > 0.0) || !(m.quad.abs_tol > 0.0) || m.quad.max_subdivisions < 1)
    throw ConfigError("quadrature settings must be positive");
  return m;
}

std::string out_path(const Common& m, const std::string& name) {
  if (m.out_dir.empty()) return name;
  fs::create_directories(m.out_dir);
  return (fs::path(m.out_dir) / name).string();
}

std::vector<double> schedule_from(const cfg::KvConfig& c, double step, bool temporal) {
  std::vector<double> levels = c.get_list("levels");
  if (levels.empty()) {
    const int coarse = c.get_int("level_coarse", temporal ? 5 : 4);
    const int fine = c.get_int("level_fine", temporal ? 8 : 7);
    auto s = qcov::dyadic_schedule(temporal ? qcov::EpsilonSchedule::Kind::temporal
                                            : qcov::EpsilonSchedule::Kind::spatial,
                                   coarse, fine);
    levels = s.levels;
  }
  qcov::EpsilonSchedule sched;
  sched.levels = levels;
  sched.kind = temporal ? qcov::EpsilonSchedule::Kind::temporal
                        : qcov::EpsilonSchedule::Kind::spatial;
  sched.validate(step);
  return levels;
}

// shared ensemble for the qv / pqc / ito / localtime experiments
struct Ensemble {
  bool temporal = false;
  double t = 1.0, x = 0.0;
  double step = 0.0;
  std::vector<double> levels;
  int n = 0;
  std::uint64_t seed = 1;
  std::shared_ptr<const FieldGrid> grid;
  std::vector<FieldSample> draws;
  PathView path(int r) const {
    return temporal ? slice_time(draws[std::size_t(r)], 0)
                    : slice_space(draws[std::size_t(r)], 0);
  }
};

Ensemble build_ensemble(const cfg::KvConfig& c, const Common& m) {
  Ensemble e;
  const std::string domain = c.get("domain", "space");
  if (domain != "space" && domain != "time")
    throw ConfigError("domain must be space or time");
  e.temporal = domain == "time";
  e.t = c.get_double("t", 1.0);
  e.x = c.get_double("x", e.temporal ? 0.0 : 1.0);
  e.seed = m.seed;
  e.n = c.get_int("n", 50);
  if (e.n < 1) throw ConfigError("n must be >= 1");
  FieldGrid g;
  if (e.temporal) {
    e.step = c.get_double("dt", std::ldexp(1.0, -12));
    e.levels = schedule_from(c, e.step, true);
    g = time_slice_grid(e.x, e.t + e.levels.front(), e.step);
  } else {
    e.step = c.get_double("dx", std::ldexp(1.0, -10));
    e.levels = schedule_from(c, e.step, false);
    g = space_slice_grid(e.t, std::min(0.0, e.x), std::max(0.0, e.x) + e.levels.front(),
                         e.step);
  }
  sampler::SamplerConfig scfg;
  sampler::Factor f = sampler::prepare(g, m.quad, scfg);
  e.grid = std::make_shared<FieldGrid>(std::move(g));
  e.draws = sampler::draw(e.grid, f, e.n, e.seed);
  return e;
}

ordered_json level_table(const std::vector<double>& levels,
                         const std::vector<stats::Aggregate>& rows) {
  ordered_json out = ordered_json::array();
  for (std::size_t l = 0; l < levels.size(); ++l) {
    ordered_json row;
    row["level"] = levels[l];
    row["mean"] = rows[l].mean;
    row["std_err"] = rows[l].std_err;
    row["n"] = rows[l].n;
    out.push_back(row);
  }
  return out;
}

// collects per-replicate, per-level values with interrupt-aware aggregation
struct LevelSweep {
  std::vector<std::vector<double>> by_level;  // [level][replicate slot]
  std::vector<char> done;
  int completed = 0;

  LevelSweep(std::size_t levels, std::size_t n)
      : by_level(levels, std::vector<double>(n, 0.0)), done(n, 0) {}

  std::vector<stats::Aggregate> aggregate() const {
    std::vector<stats::Aggregate> out;
    for (const auto& lv : by_level) {
      std::vector<double> vals;
      vals.reserve(lv.size());
      for (std::size_t r = 0; r < lv.size(); ++r)
        if (done[r]) vals.push_back(lv[r]);
      // an interrupt can land before the first replicate finishes; flush zeros
      out.push_back(vals.empty() ? stats::Aggregate{} : stats::mc_aggregate(vals));
    }
    return out;
  }
};

int count_done(std::vector<char>& done) {
  int k = 0;
  for (char d : done) k += d ? 1 : 0;
  return k;
}

int trend_violations(const std::vector<double>& abs_means) {
  int v = 0;
  for (std::size_t i = 1; i < abs_means.size(); ++i)
    if (abs_means[i] > abs_means[i - 1]) ++v;
  return v;
}

RunReport run_sample(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  const std::string domain = c.get("domain", "space");
  const int n = c.get_int("n", 8);
  if (n < 1) throw ConfigError("n must be >= 1");
  FieldGrid g;
  if (domain == "space") {
    g = space_slice_grid(c.get_double("t", 1.0), c.get_double("x_min", 0.0),
                         c.get_double("x_max", 1.0), c.get_double("dx", 1.0 / 64));
  } else if (domain == "time") {
    g = time_slice_grid(c.get_double("x", 0.0), c.get_double("t_max", 1.0),
                        c.get_double("dt", 1.0 / 256));
  } else if (domain == "rect") {
    const auto times = c.get_list("times");
    const auto spaces = c.get_list("spaces");
    g = rect_grid(times, spaces);
  } else {
    throw ConfigError("domain must be space, time, or rect");
  }
  auto samples = sampler::sample_field(g, n, m.seed, m.quad);
  const bool bin = c.get_bool("binary", false);
  for (const auto& s : samples) {
    char name[64];
    std::snprintf(name, sizeof name, "sample_%04u.%s", s.replicate, bin ? "bin" : "csv");
    if (bin)
      write_binary(s, out_path(m, name));
    else
      write_csv(s, out_path(m, name));
  }
  // variance sanity at the final grid point
  const std::size_t last = g.points() - 1;
  std::vector<double> sq;
  sq.reserve(samples.size());
  for (const auto& s : samples) sq.push_back(s.values[last] * s.values[last]);
  const double var = kernels::variance(g.times.back());
  const auto agg = stats::mc_aggregate(sq);
  const double tol = 5.0 * std::sqrt(2.0 / double(n));
  if (var > 0.0)
    rep.criteria.push_back(crit_abs("variance_ratio", agg.mean / var, 1.0, tol));
  rep.detail["points"] = g.points();
  rep.detail["replicates"] = n;
  rep.detail["variance_exact"] = var;
  rep.detail["variance_empirical"] = agg.mean;
  return rep;
}

RunReport run_qv(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  Ensemble e = build_ensemble(c, m);
  LevelSweep sweep(e.levels.size(), std::size_t(e.n));
  parallel_for(e.n, m.threads, [&](int r) {
    const PathView p = e.path(r);
    for (std::size_t l = 0; l < e.levels.size(); ++l)
      sweep.by_level[l][std::size_t(r)] =
          e.temporal ? qcov::temporal_qv(p, e.t, e.levels[l])
                     : qcov::spatial_qv(p, e.x, e.levels[l]);
    sweep.done[std::size_t(r)] = 1;
  });
  sweep.completed = count_done(sweep.done);
  const double limit = e.temporal ? sqrt_2_over_pi * std::sqrt(e.t) : std::abs(e.x);
  const auto rows = sweep.aggregate();
  const double band_lo = c.get_double("band_lo", 0.95);
  const double band_hi = c.get_double("band_hi", 1.05);
  const double ratio = rows.back().mean / limit;
  rep.criteria.push_back(crit("qv_band", ratio, 1.0, 0.5 * (band_hi - band_lo),
                              ratio >= band_lo && ratio <= band_hi));
  std::vector<double> gap_means;
  for (std::size_t l = 0; l < e.levels.size(); ++l) {
    std::vector<double> av;
    for (std::size_t r = 0; r < sweep.done.size(); ++r)
      if (sweep.done[r]) av.push_back(std::abs(sweep.by_level[l][r] - limit));
    gap_means.push_back(av.empty() ? 0.0 : stats::mc_aggregate(av).mean);
  }
  rep.detail["limit"] = limit;
  rep.detail["levels"] = level_table(e.levels, rows);
  if (e.levels.size() >= 2) {
    const auto fit = stats::rate_fit(e.levels, gap_means);
    rep.criteria.push_back(crit("qv_rate_alpha", fit.alpha, 1.0, 1.0, fit.alpha > 0.0));
    const double r2_min = c.get_double("r2_min", 0.8);
    rep.criteria.push_back(
        crit("qv_rate_r2", fit.r2, 1.0, 1.0 - r2_min, fit.r2 >= r2_min));
    rep.detail["rate"] = {{"alpha", fit.alpha}, {"r2", fit.r2}, {"floored", fit.floored}};
  }
  std::vector<qcov::EstimatorOutput> outs;
  for (int r = 0; r < e.n; ++r) {
    if (!sweep.done[std::size_t(r)]) continue;
    qcov::EstimatorOutput o;
    o.kind = e.temporal ? "temporal_qv" : "spatial_qv";
    o.f_id = "identity";
    o.levels = e.levels;
    for (std::size_t l = 0; l < e.levels.size(); ++l) {
      o.values.push_back(sweep.by_level[l][std::size_t(r)]);
      o.gaps.push_back(std::abs(sweep.by_level[l][std::size_t(r)] - limit));
    }
    o.reference = limit;
    o.seed = e.seed;
    o.replicate = r;
    outs.push_back(std::move(o));
  }
  qcov::write_csv(outs, out_path(m, "estimates.csv"));
  return rep;
}

RunReport run_pqc(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  Ensemble e = build_ensemble(c, m);
  const fns::TestFunction f = fns::by_id(c.get("f", "sine"));
  LevelSweep sweep(e.levels.size(), std::size_t(e.n));
  std::vector<double> refs(std::size_t(e.n), 0.0);
  parallel_for(e.n, m.threads, [&](int r) {
    const PathView p = e.path(r);
    refs[std::size_t(r)] = e.temporal ? qcov::temporal_reference(p, f, e.t)
                                      : qcov::spatial_reference(p, f, e.x);
    for (std::size_t l = 0; l < e.levels.size(); ++l)
      sweep.by_level[l][std::size_t(r)] =
          e.temporal ? qcov::temporal_pqc(p, f, e.t, e.levels[l])
                     : qcov::spatial_pqc(p, f, e.x, e.levels[l]);
    sweep.done[std::size_t(r)] = 1;
  });
  sweep.completed = count_done(sweep.done);
  // relative gap of the finest level against the per-path reference
  double gap_acc = 0.0, ref_acc = 0.0;
  std::vector<qcov::EstimatorOutput> outs;
  for (int r = 0; r < e.n; ++r) {
    if (!sweep.done[std::size_t(r)]) continue;
    const double fin = sweep.by_level.back()[std::size_t(r)];
    gap_acc += std::abs(fin - refs[std::size_t(r)]);
    ref_acc += std::abs(refs[std::size_t(r)]);
    qcov::EstimatorOutput o;
    o.kind = e.temporal ? "temporal_pqc" : "spatial_pqc";
    o.f_id = f.id;
    o.levels = e.levels;
    for (std::size_t l = 0; l < e.levels.size(); ++l) {
      o.values.push_back(sweep.by_level[l][std::size_t(r)]);
      o.gaps.push_back(std::abs(sweep.by_level[l][std::size_t(r)] - refs[std::size_t(r)]));
    }
    o.reference = refs[std::size_t(r)];
    o.seed = e.seed;
    o.replicate = r;
    outs.push_back(std::move(o));
  }
  const double rel_gap = ref_acc > 0.0 ? gap_acc / ref_acc : gap_acc;
  const double gap_tol = c.get_double("gap_tol", 0.1);
  rep.criteria.push_back(crit("pqc_rel_gap", rel_gap, 0.0, gap_tol, rel_gap <= gap_tol));
  const auto rows = sweep.aggregate();
  rep.detail["f"] = f.id;
  rep.detail["levels"] = level_table(e.levels, rows);
  rep.detail["rel_gap_finest"] = rel_gap;
  qcov::write_csv(outs, out_path(m, "estimates.csv"));
  return rep;
}

RunReport run_ito(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  Ensemble e = build_ensemble(c, m);
  const fns::TestFunction f = fns::by_id(c.get("f", "sine"));
  LevelSweep sweep(e.levels.size(), std::size_t(e.n));
  parallel_for(e.n, m.threads, [&](int r) {
    const PathView p = e.path(r);
    for (std::size_t l = 0; l < e.levels.size(); ++l)
      sweep.by_level[l][std::size_t(r)] =
          e.temporal ? qcov::ito_residual_time(f, p, e.t, e.levels[l])
                     : qcov::ito_residual_space(f, p, e.x, e.levels[l]);
    sweep.done[std::size_t(r)] = 1;
  });
  sweep.completed = count_done(sweep.done);
  const auto rows = sweep.aggregate();
  std::vector<double> abs_means;
  for (std::size_t l = 0; l < e.levels.size(); ++l) {
    std::vector<double> av;
    for (std::size_t r = 0; r < sweep.done.size(); ++r)
      if (sweep.done[r]) av.push_back(std::abs(sweep.by_level[l][r]));
    abs_means.push_back(av.empty() ? 0.0 : stats::mc_aggregate(av).mean);
  }
  const double tol = c.get_double("residual_tol", 0.1);
  rep.criteria.push_back(
      crit("ito_abs_finest", abs_means.back(), 0.0, tol, abs_means.back() <= tol));
  const int viol = trend_violations(abs_means);
  rep.criteria.push_back(crit("ito_trend", double(viol), 0.0, 1.0, viol <= 1));
  rep.detail["f"] = f.id;
  rep.detail["levels"] = level_table(e.levels, rows);
  rep.detail["abs_means"] = abs_means;
  std::vector<qcov::EstimatorOutput> outs;
  for (int r = 0; r < e.n; ++r) {
    if (!sweep.done[std::size_t(r)]) continue;
    qcov::EstimatorOutput o;
    o.kind = e.temporal ? "ito_residual_time" : "ito_residual_space";
    o.f_id = f.id;
    o.levels = e.levels;
    for (std::size_t l = 0; l < e.levels.size(); ++l) {
      o.values.push_back(sweep.by_level[l][std::size_t(r)]);
      o.gaps.push_back(std::abs(sweep.by_level[l][std::size_t(r)]));
    }
    o.reference = 0.0;
    o.seed = e.seed;
    o.replicate = r;
    outs.push_back(std::move(o));
  }
  qcov::write_csv(outs, out_path(m, "estimates.csv"));
  return rep;
}

RunReport run_localtime(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  Ensemble e = build_ensemble(c, m);
  lt::Mollifier mol;
  const double coupling = c.get_double("bandwidth_coupling", 1.0);
  const double finest = e.levels.back();
  mol.n = 1.0 / (coupling * std::sqrt(finest));
  const std::string profile_kind = c.get("mollifier", "bump");
  if (profile_kind == "gaussian")
    mol.profile = lt::Mollifier::Profile::gaussian;
  else if (profile_kind != "bump")
    throw ConfigError("mollifier must be bump or gaussian");
  const fns::TestFunction f = fns::by_id(c.get("f", "indicator:-0.3:0.3"));
  const double a_level = c.get_double("a", 0.0);
  const int n_levels = c.get_int("a_levels", 256);

  std::vector<double> mass_ratio(std::size_t(e.n), 0.0);
  std::vector<double> by_res(std::size_t(e.n), 0.0);
  std::vector<double> tanaka(std::size_t(e.n), 0.0);
  std::vector<char> done(std::size_t(e.n), 0);
  parallel_for(e.n, m.threads, [&](int r) {
    const PathView p = e.path(r);
    const auto prof = e.temporal ? lt::local_time_profile_time(p, e.t, mol, n_levels)
                                 : lt::local_time_profile_space(p, e.x, mol, n_levels);
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < prof.levels.size(); ++k)
      mass += 0.5 * (prof.mass[k] + prof.mass[k + 1]) *
              (prof.levels[k + 1] - prof.levels[k]);
    const double expect = e.temporal ? std::sqrt(e.t) / sqrt_pi : std::abs(e.x);
    mass_ratio[std::size_t(r)] = mass / expect;
    if (e.temporal) {
      tanaka[std::size_t(r)] =
          lt::tanaka_residual_time(a_level, p, e.t, e.levels.back(), mol);
    } else {
      by_res[std::size_t(r)] = lt::bouleau_yor_residual(f, p, e.x, e.levels.back(), mol);
      const auto tk = lt::tanaka_residual_space(a_level, p, e.x, e.levels.back(), mol);
      tanaka[std::size_t(r)] = tk.abs_part;
    }
    done[std::size_t(r)] = 1;
  });
  std::vector<double> mr, br, tk;
  for (std::size_t r = 0; r < done.size(); ++r)
    if (done[r]) {
      mr.push_back(mass_ratio[r]);
      br.push_back(std::abs(by_res[r]));
      tk.push_back(std::abs(tanaka[r]));
    }
  const auto mr_agg = mr.empty() ? stats::Aggregate{} : stats::mc_aggregate(mr);
  const double mass_tol = c.get_double("mass_tol", 0.02);
  rep.criteria.push_back(crit_abs("mass_ratio", mr_agg.mean, 1.0, mass_tol));
  const double res_tol = c.get_double("residual_tol", 0.1);
  if (!e.temporal) {
    const auto br_agg = br.empty() ? stats::Aggregate{} : stats::mc_aggregate(br);
    rep.criteria.push_back(
        crit("by_residual", br_agg.mean, 0.0, res_tol, br_agg.mean <= res_tol));
  }
  const auto tk_agg = tk.empty() ? stats::Aggregate{} : stats::mc_aggregate(tk);
  rep.criteria.push_back(
      crit("tanaka_residual", tk_agg.mean, 0.0, res_tol, tk_agg.mean <= res_tol));
  rep.detail["bandwidth"] = mol.bandwidth();
  rep.detail["mollifier"] = profile_kind;
  rep.detail["mass_ratio_mean"] = mr_agg.mean;
  rep.detail["a"] = a_level;
  // profile of the first completed replicate, for inspection
  for (std::size_t r = 0; r < done.size(); ++r) {
    if (!done[r]) continue;
    const PathView p = e.path(int(r));
    auto prof = e.temporal ? lt::local_time_profile_time(p, e.t, mol, n_levels)
                           : lt::local_time_profile_space(p, e.x, mol, n_levels);
    prof.seed = e.seed;
    lt::write_csv(prof, out_path(m, "local_time.csv"));
    break;
  }
  return rep;
}

RunReport run_lemmas(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  const int draws = c.get_int("draws", 10000);
  if (draws < 4) throw ConfigError("draws must be >= 4");
  const auto sweep = lemmas::bound_sweep(m.seed, draws, m.quad);
  ordered_json table = ordered_json::array();
  for (const auto& st : sweep.checks) {
    ordered_json row;
    row["check"] = st.name;
    row["draws"] = st.draws;
    row["pass_rate"] = st.pass_rate;
    row["pass_rate_corrected"] = st.pass_rate_corrected;
    row["worst_ratio"] = st.worst_ratio;
    row["best_ratio"] = st.best_ratio;
    row["fitted"] = st.fitted;
    row["stability"] = st.stability;
    table.push_back(row);
    if (st.fixed_constant) {
      rep.criteria.push_back(crit(st.name + "_printed", st.pass_rate, 1.0, 0.0,
                                  st.pass_rate == 1.0));
      if (st.pass_rate_corrected != st.pass_rate ||
          st.name == "space_lipschitz" || st.name == "disjoint_space_increments")
        rep.criteria.push_back(crit(st.name + "_corrected", st.pass_rate_corrected, 1.0,
                                    0.0, st.pass_rate_corrected == 1.0));
    }
    const bool fitted_check = st.name == "increment_growth" ||
                              st.name == "time_cross_term" ||
                              st.name == "disjoint_time_increments" ||
                              st.name == "space_pair_determinant";
    if (fitted_check)
      rep.criteria.push_back(
          crit(st.name + "_stability", st.stability, 0.0, 0.5, st.stable));
    if (st.name == "time_pair_determinant")
      rep.criteria.push_back(crit("time_pair_identity", st.identity_rel_err, 0.0, 1e-12,
                                  st.identity_rel_err <= 1e-12));
  }
  rep.detail["checks"] = table;
  rep.detail["draws_per_check"] = draws;
  return rep;
}

double p_limit(double r) {
  if (r <= 0.0) return 0.0;
  return -(1.0 - std::exp(-0.5 * r * r)) / r +
         0.5 * sqrt_pi * std::sqrt(2.0) * std::erf(r / std::sqrt(2.0));
}

RunReport run_scaling(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  const std::string limit = c.get("limit", "space");
  ScalingKind kind;
  if (limit == "space")
    kind = ScalingKind::space;
  else if (limit == "time")
    kind = ScalingKind::time;
  else if (limit == "joint")
    kind = ScalingKind::joint;
  else
    throw ConfigError("limit must be space, time, or joint");
  std::vector<double> levels = c.get_list("levels");
  if (levels.empty())
    for (int p = 4; p <= 10; ++p) levels.push_back(std::ldexp(1.0, -p));
  const double t = c.get_double("t", 1.0);
  const double x = c.get_double("x", 0.0);
  const auto res = scaling_limit_check(kind, t, x, levels, m.quad);
  const double tol = c.get_double("err_tol", 0.05);
  rep.criteria.push_back(crit("scaling_final_err", res.worst_final_err, 0.0, tol,
                              res.worst_final_err <= tol));
  ordered_json rows = ordered_json::array();
  for (const auto& r : res.rows) {
    ordered_json row;
    row["level"] = r.level;
    if (kind == ScalingKind::joint) row["k"] = r.k;
    row["value"] = r.value;
    row["target"] = r.target;
    row["ratio"] = r.ratio;
    rows.push_back(row);
  }
  rep.detail["limit"] = limit;
  rep.detail["rows"] = rows;
  return rep;
}

RunReport run_report(const cfg::KvConfig& c, const Common& m) {
  RunReport rep;
  const std::string in = c.get("in", "");
  if (in.empty()) throw ConfigError("missing key: in (estimator csv path)");
  std::ifstream src(in);
  if (!src) throw ConfigError("cannot open " + in);
  std::string line;
  if (!std::getline(src, line) || line != "kind,f_id,level,value,reference,gap,seed,replicate")
    throw ConfigError("unrecognized estimator csv header in " + in);
  struct Key {
    std::string kind, f_id;
    double level;
    bool operator<(const Key& o) const {
      if (kind != o.kind) return kind < o.kind;
      if (f_id != o.f_id) return f_id < o.f_id;
      return level < o.level;
    }
  };
  std::map<Key, std::vector<double>> gaps;
  std::size_t rows = 0;
  while (std::getline(src, line)) {
    if (line.empty()) continue;
    std::vector<std::string> col;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) col.push_back(tok);
    if (col.size() != 8) throw ConfigError("malformed estimator csv row: " + line);
    try {
      gaps[{col[0], col[1], std::stod(col[2])}].push_back(std::stod(col[5]));
    } catch (const std::exception&) {
      throw ConfigError("malformed estimator csv row: " + line);
    }
    ++rows;
  }
  if (rows == 0) throw ConfigError("estimator csv has no data rows");
  ordered_json table = ordered_json::array();
  std::string cur_kind, cur_f;
  std::vector<double> levels, means;
  auto flush_group = [&]() {
    if (levels.empty()) return;
    ordered_json g;
    g["kind"] = cur_kind;
    g["f_id"] = cur_f;
    g["levels"] = levels;
    g["mean_abs_gap"] = means;
    if (levels.size() >= 2) {
      std::vector<double> lv = levels, gv = means;
      std::reverse(lv.begin(), lv.end());
      std::reverse(gv.begin(), gv.end());
      const auto fit = stats::rate_fit(lv, gv);
      g["rate"] = {{"alpha", fit.alpha}, {"r2", fit.r2}};
    }
    table.push_back(g);
    levels.clear();
    means.clear();
  };
  for (const auto& [k, v] : gaps) {
    if (k.kind != cur_kind || k.f_id != cur_f) {
      flush_group();
      cur_kind = k.kind;
      cur_f = k.f_id;
    }
    levels.push_back(k.level);
    means.push_back(stats::mc_aggregate(v).mean);
  }
  flush_group();
  rep.criteria.push_back(crit("rows", double(rows), double(rows), 0.0, true));
  rep.detail["groups"] = table;
  rep.detail["source"] = in;
  (void)m;
  return rep;
}

}  // namespace

bool RunReport::all_pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return !interrupted;
}

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["kind"] = r.kind;
  j["config_fingerprint"] = r.config_fingerprint;
  ordered_json crits = ordered_json::array();
  for (const auto& c : r.criteria) {
    ordered_json line;
    line["id"] = c.id;
    line["value"] = c.value;
    line["target"] = c.target;
    line["tolerance"] = c.tolerance;
    line["pass"] = c.pass;
    crits.push_back(line);
  }
  j["criteria"] = crits;
  j["detail"] = r.detail;
  j["interrupted"] = r.interrupted;
  j["timestamp"] = {{"started_at", r.started_at}, {"wall_clock_s", r.wall_clock_s}};
  return j;
}

void write_report(const RunReport& r, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << to_json(r).dump(2) << "\n";
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  fs::rename(tmp, path);
}

void request_interrupt() { g_interrupt.store(true); }
bool interrupt_requested() { return g_interrupt.load(); }
void clear_interrupt() { g_interrupt.store(false); }

RunReport run(const cfg::KvConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const Common m = parse_common(config);
  RunReport rep;
  if (m.kind == "sample")
    rep = run_sample(config, m);
  else if (m.kind == "qv")
    rep = run_qv(config, m);
  else if (m.kind == "pqc")
    rep = run_pqc(config, m);
  else if (m.kind == "ito")
    rep = run_ito(config, m);
  else if (m.kind == "localtime")
    rep = run_localtime(config, m);
  else if (m.kind == "lemmas")
    rep = run_lemmas(config, m);
  else if (m.kind == "scaling")
    rep = run_scaling(config, m);
  else if (m.kind == "report")
    rep = run_report(config, m);
  else
    throw ConfigError("unknown kind: " + m.kind);
  rep.kind = m.kind;
  rep.config_fingerprint = config.fingerprint();
  rep.started_at = now_utc();
  rep.interrupted = interrupt_requested();
  rep.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_report(rep, out_path(m, "report.json"));
  return rep;
}

ScalingResult scaling_limit_check(ScalingKind kind, double t, double x,
                                  const std::vector<double>& levels,
                                  const QuadratureConfig& quad) {
  if (levels.empty()) throw ConfigError("needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] < levels[i - 1]))
      throw ConfigError("levels must be strictly decreasing");
  if (!(t > 0.0)) throw std::domain_error("needs t > 0");
  ScalingResult out;
  out.kind = kind;
  const double ks[3] = {0.5, 1.0, 2.0};
  for (double eps : levels) {
    if (kind == ScalingKind::space) {
      ScalingRow r;
      r.level = eps;
      r.value = kernels::increment_second_moment(t, x + eps, t, x, quad) / eps;
      r.target = 1.0;
      r.ratio = r.value;
      out.rows.push_back(r);
    } else if (kind == ScalingKind::time) {
      ScalingRow r;
      r.level = eps;
      r.value =
          kernels::increment_second_moment(t + eps, x, t, x, quad) / std::sqrt(eps);
      r.target = sqrt_2_over_pi;
      r.ratio = r.value / r.target;
      out.rows.push_back(r);
    } else {
      for (double k : ks) {
        ScalingRow r;
        r.level = eps;
        r.k = k;
        r.value =
            kernels::increment_second_moment(t + k * eps * eps, x + eps, t, x, quad) / eps;
        r.target = 2.0 / sqrt_2pi * (std::sqrt(k) + p_limit(1.0 / std::sqrt(k)));
        r.ratio = r.value / r.target;
        out.rows.push_back(r);
      }
    }
  }
  for (const auto& r : out.rows)
    if (r.level == levels.back())
      out.worst_final_err = std::max(out.worst_final_err, std::abs(r.ratio - 1.0));
  return out;
}

}  // namespace she::harness
