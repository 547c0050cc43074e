#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "she/common.hpp"
#include "she/quadrature.hpp"
#include "she/rng.hpp"

using namespace she;

TEST_CASE("streams are deterministic and key-disjoint") {
  rng::Stream a(123, 7), b(123, 7), c(123, 8), d(124, 7);
  std::uint64_t first = 0;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    if (i == 0) first = va;
    CHECK(va == b.next_u64());
  }
  int hits_c = 0, hits_d = 0;
  for (int i = 0; i < 64; ++i) {
    if (c.next_u64() == first) ++hits_c;
    if (d.next_u64() == first) ++hits_d;
  }
  CHECK(hits_c == 0);
  CHECK(hits_d == 0);
}

TEST_CASE("uniform draws live in the open unit interval") {
  rng::Stream st(9, 0);
  double mn = 1.0, mx = 0.0, acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = st.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    mn = std::min(mn, u);
    mx = std::max(mx, u);
    acc += u;
  }
  CHECK(acc / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(mn < 1e-4);
  CHECK(mx > 1.0 - 1e-4);
}

TEST_CASE("normal draws match gaussian moments and cdf") {
  rng::Stream st(2024, 5);
  const int n = 2000000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0, maxabs = 0;
  int beyond_tail = 0;
  const double zs[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  int below[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double z = st.next_normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
    maxabs = std::max(maxabs, std::abs(z));
    if (std::abs(z) > 3.6541528853610088) ++beyond_tail;
    for (int k = 0; k < 5; ++k)
      if (z <= zs[k]) ++below[k];
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  const double skew = s3 / n;
  const double kurt = s4 / n;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(skew) < 5.0 * std::sqrt(6.0 / n));
  CHECK(std::abs(kurt - 3.0) < 5.0 * std::sqrt(24.0 / n));
  for (int k = 0; k < 5; ++k) {
    const double phi = 0.5 * std::erfc(-zs[k] / std::sqrt(2.0));
    const double se = std::sqrt(phi * (1.0 - phi) / n);
    CHECK(std::abs(double(below[k]) / n - phi) < 5.0 * se);
  }
  // the tail sampler must actually reach past the ziggurat cutoff
  CHECK(maxabs > 4.0);
  CHECK(beyond_tail > 200);
  CHECK(beyond_tail < 900);
}

TEST_CASE("normal stream is reproducible") {
  rng::Stream a(55, 3), b(55, 3);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_normal() == b.next_normal());
}

TEST_CASE("fixed-seed normal batch has small mean") {
  rng::Stream st(1, 0);
  double acc = 0.0;
  for (int i = 0; i < 10000; ++i) acc += st.next_normal();
  CHECK(std::abs(acc / 10000.0) < 0.05);
}

TEST_CASE("quadrature reproduces elementary integrals") {
  QuadratureConfig cfg;
  auto r1 = integrate([](double x) { return x * x; }, 0.0, 1.0, cfg);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, cfg);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-12));
  auto r3 = integrate(
      [](double x) { return std::exp(-0.5 * x * x) / sqrt_2pi; }, -8.0, 8.0, cfg);
  CHECK(r3.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(r1.value - 1.0 / 3.0) <= std::max(r1.error, 1e-14));
}

TEST_CASE("quadrature handles an integrable endpoint singularity") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                 cfg);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.subdivisions > 4);
}

TEST_CASE("quadrature reports non-convergence honestly") {
  QuadratureConfig tight;
  tight.max_subdivisions = 4;
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                 tight);
  CHECK(!r.converged);
  CHECK_THROWS_AS(integrate_checked(
                      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight),
                  NumericalError);
}

TEST_CASE("degenerate and reversed intervals") {
  QuadratureConfig cfg;
  auto r = integrate([](double x) { return x; }, 2.0, 2.0, cfg);
  CHECK(r.value == 0.0);
  auto fwd = integrate([](double x) { return x * x; }, 0.0, 2.0, cfg);
  auto rev = integrate([](double x) { return x * x; }, 2.0, 0.0, cfg);
  CHECK(rev.value == doctest::Approx(-fwd.value).epsilon(1e-13));
}

TEST_CASE("pairwise summation is accurate on long arrays") {
  std::vector<double> xs(1000000, 0.1);
  CHECK(pairwise_sum(xs) == doctest::Approx(100000.0).epsilon(1e-12));
  std::vector<double> alt;
  for (int i = 0; i < 10001; ++i) alt.push_back(i % 2 == 0 ? 1.0 : -1.0);
  CHECK(pairwise_sum(alt) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("error types carry context") {
  NumericalError e("tolerance unreachable", 1.5, 1e-3);
  CHECK(e.value == 1.5);
  CHECK(e.achieved_error == 1e-3);
  FactorizationError f("retries exhausted", 0.25);
  CHECK(f.final_jitter == 0.25);
}
