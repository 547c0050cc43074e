#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "she/common.hpp"
#include "she/fd.hpp"
#include "she/grid.hpp"
#include "she/kernels.hpp"
#include "she/sampler.hpp"

using namespace she;

namespace {
FieldGrid coarse_grid() {
  const double dx = 1.0 / 16, dt = dx * dx / 2.0;
  FieldGrid g = rect_grid({0.5, 1.0}, {-0.5, 0.0, 0.5}, 16);
  g.dt = dt;
  g.dx = dx;
  return g;
}
}  // namespace

TEST_CASE("forced zero noise integrates to the zero field") {
  FieldGrid g = coarse_grid();
  fd::FdConfig cfg;
  cfg.half_width = 4.0;
  cfg.zero_noise = true;
  const auto s = fd::fd_integrate(g, 2, 1, cfg);
  REQUIRE(s.size() == 2);
  for (const auto& r : s)
    for (double v : r.values) CHECK(v == 0.0);
}

TEST_CASE("stability guard rejects dt above dx squared") {
  FieldGrid g = rect_grid({0.5, 1.0}, {0.0}, 16);
  g.dx = 1.0 / 16;
  g.dt = 2.0 / 256;
  CHECK_THROWS_AS(fd::fd_integrate(g, 1, 1, {}), ConfigError);
}

TEST_CASE("mesh alignment is enforced") {
  const double dx = 1.0 / 16, dt = dx * dx / 2.0;
  FieldGrid off = rect_grid({0.5, 1.0}, {0.013}, 16);
  off.dt = dt;
  off.dx = dx;
  CHECK_THROWS_AS(fd::fd_integrate(off, 1, 1, {}), ConfigError);
  FieldGrid far = rect_grid({0.5, 1.0}, {0.0, 3.5}, 16);
  far.dt = dt;
  far.dx = dx;
  fd::FdConfig tight;
  tight.half_width = 2.0;
  CHECK_THROWS_AS(fd::fd_integrate(far, 1, 1, tight), ConfigError);
}

TEST_CASE("initial condition is exactly zero") {
  FieldGrid g = rect_grid({0.0, 0.5}, {0.0, 0.5}, 16);
  g.dt = 1.0 / 512;
  g.dx = 1.0 / 16;
  fd::FdConfig cfg;
  cfg.half_width = 4.0;
  const auto s = fd::fd_integrate(g, 2, 3, cfg);
  for (const auto& r : s) {
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.at(0, 1) == 0.0);
    CHECK(r.at(1, 0) != 0.0);
  }
}

TEST_CASE("integration is deterministic with a stable replicate prefix") {
  FieldGrid g = rect_grid({0.25}, {0.0}, 16);
  g.dt = 1.0 / 512;
  g.dx = 1.0 / 16;
  fd::FdConfig cfg;
  cfg.half_width = 2.0;
  const auto a = fd::fd_integrate(g, 11, 9, cfg);
  const auto b = fd::fd_integrate(g, 11, 9, cfg);
  const auto c = fd::fd_integrate(g, 3, 9, cfg);
  for (int k = 0; k < 11; ++k) CHECK(a[k].values[0] == b[k].values[0]);
  for (int k = 0; k < 3; ++k) CHECK(a[k].values[0] == c[k].values[0]);
  const auto d = fd::fd_integrate(g, 3, 10, cfg);
  CHECK(a[0].values[0] != d[0].values[0]);
}

TEST_CASE("coarse-mesh statistics track the exact law") {
  FieldGrid g = coarse_grid();
  fd::FdConfig cfg;
  cfg.half_width = 4.0;
  const int n = 800;
  const auto s = fd::fd_integrate(g, n, 5, cfg);
  double var1 = 0.0, cov_ts = 0.0, var_half = 0.0;
  for (const auto& r : s) {
    var1 += r.at(1, 1) * r.at(1, 1);
    var_half += r.at(0, 1) * r.at(0, 1);
    cov_ts += r.at(0, 1) * r.at(1, 1);
  }
  var1 /= n;
  var_half /= n;
  cov_ts /= n;
  // MC standard error alone is ~5% here; the band covers it plus O(dx) bias
  CHECK(var1 == doctest::Approx(kernels::variance(1.0)).epsilon(0.15));
  CHECK(var_half == doctest::Approx(kernels::variance(0.5)).epsilon(0.15));
  CHECK(cov_ts == doctest::Approx(kernels::cov_time(1.0, 0.5)).epsilon(0.2));
}

TEST_CASE("both samplers agree on a shared coarse point") {
  FieldGrid g = coarse_grid();
  fd::FdConfig cfg;
  cfg.half_width = 4.0;
  const int n = 800;
  const auto fd_s = fd::fd_integrate(g, n, 5, cfg);
  const auto ex_s = sampler::sample_field(g, n, 6);
  double v_fd = 0.0, v_ex = 0.0;
  for (int k = 0; k < n; ++k) {
    v_fd += fd_s[k].at(1, 1) * fd_s[k].at(1, 1);
    v_ex += ex_s[k].at(1, 1) * ex_s[k].at(1, 1);
  }
  v_fd /= n;
  v_ex /= n;
  const double se_diff = kernels::variance(1.0) * std::sqrt(2.0 / n) * std::sqrt(2.0);
  CHECK(std::abs(v_fd - v_ex) <= 4.0 * se_diff + 0.01);
}
