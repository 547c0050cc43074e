#include "she/sampler.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "she/common.hpp"
#include "she/kernels.hpp"
#include "she/rng.hpp"

namespace she::sampler {

namespace {

// row-major lower triangle occupies the same addresses as a column-major upper
// triangle, so 'U' here factors and stores exactly the layout draw() streams
int potrf_lower_rowmajor(double* a, std::size_t n, std::size_t lda) {
  return LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'U', lapack_int(n), a, lapack_int(lda));
}

double mean_diag(const std::vector<double>& m, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += m[i * n + i];
  return n ? s / double(n) : 0.0;
}

void add_jitter(std::vector<double>& m, std::size_t n, double rel) {
  const double boost = rel * mean_diag(m, n);
  for (std::size_t i = 0; i < n; ++i)
    if (m[i * n + i] != 0.0) m[i * n + i] += boost;
}

struct ZeroLayout {
  std::size_t prefix = 0;
  std::vector<std::uint32_t> active;  // nonempty only when zeros are scattered
};

ZeroLayout find_zero_rows(const std::vector<double>& m, std::size_t n) {
  ZeroLayout z;
  std::vector<char> zero(n, 0);
  std::size_t nz = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i * n + i] == 0.0) {
      zero[i] = 1;
      ++nz;
      for (std::size_t j = 0; j < n; ++j)
        if (m[i * n + j] != 0.0)
          throw std::invalid_argument("zero-variance row with nonzero covariance");
    }
  }
  std::size_t p = 0;
  while (p < n && zero[p]) ++p;
  bool prefix_only = true;
  for (std::size_t i = p; i < n; ++i)
    if (zero[i]) prefix_only = false;
  if (prefix_only) {
    z.prefix = p;
  } else {
    z.active.reserve(n - nz);
    for (std::size_t i = 0; i < n; ++i)
      if (!zero[i]) z.active.push_back(std::uint32_t(i));
  }
  return z;
}

// single factorization attempt, in place; returns LAPACK info
int attempt(std::vector<double>& m, std::size_t n, const ZeroLayout& z) {
  if (!z.active.empty()) {
    const std::size_t k = z.active.size();
    std::vector<double> compact(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        compact[a * k + b] = m[std::size_t(z.active[a]) * n + z.active[b]];
    const int info = potrf_lower_rowmajor(compact.data(), k, k);
    if (info != 0) return info;
    std::fill(m.begin(), m.end(), 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b <= a; ++b)
        m[std::size_t(z.active[a]) * n + z.active[b]] = compact[a * k + b];
    return 0;
  }
  const std::size_t k = z.prefix;
  if (k >= n) return 0;  // all-zero matrix factors to zero
  return potrf_lower_rowmajor(m.data() + k * n + k, n - k, n);
}

}  // namespace

std::vector<double> build_covariance(const FieldGrid& grid, const QuadratureConfig& quad) {
  grid.validate();
  const std::size_t nt = grid.nt(), nx = grid.nx(), n = nt * nx;
  std::vector<double> m(n * n);
  if (nt == 1) {
    // single-time slice: covariance depends on the two points only
    const double t = grid.times[0];
    if (grid.uniform_spaces() && nx > 1) {
      std::vector<double> byk(nx);
      for (std::size_t k = 0; k < nx; ++k)
        byk[k] = kernels::cov_space_closed(t, double(k) * grid.dx, 0.0);
      for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = 0; b < nx; ++b)
          m[a * n + b] = byk[a > b ? a - b : b - a];
    } else {
      for (std::size_t a = 0; a < nx; ++a)
        for (std::size_t b = a; b < nx; ++b)
          m[a * n + b] = m[b * n + a] =
              kernels::cov_space_closed(t, grid.spaces[a], grid.spaces[b]);
    }
    (void)quad;
    return m;
  }
  if (nx == 1) {
    for (std::size_t a = 0; a < nt; ++a)
      for (std::size_t b = a; b < nt; ++b)
        m[a * n + b] = m[b * n + a] = kernels::cov_time(grid.times[a], grid.times[b]);
    return m;
  }
  for (std::size_t p = 0; p < n; ++p) {
    const double tp = grid.times[p / nx], xp = grid.spaces[p % nx];
    for (std::size_t q = p; q < n; ++q) {
      const double tq = grid.times[q / nx], xq = grid.spaces[q % nx];
      m[p * n + q] = m[q * n + p] = kernels::cov_spacetime_closed(tp, xp, tq, xq);
    }
  }
  return m;
}

Factor factor_psd(std::vector<double> m, std::size_t n, const SamplerConfig& cfg) {
  if (m.size() != n * n) throw std::invalid_argument("matrix size mismatch");
  const ZeroLayout z = find_zero_rows(m, n);
  constexpr std::size_t copy_budget_bytes = 600ull << 20;
  const bool can_copy = n * n * 8 <= copy_budget_bytes;
  std::vector<double> pristine;
  if (can_copy) pristine = m;
  double jitter = 0.0;
  for (int retry = 0; retry <= cfg.max_retries; ++retry) {
    if (retry > 0) {
      if (!can_copy)
        throw FactorizationError("factorization failed and matrix too large to retry",
                                 jitter);
      jitter = cfg.jitter_start * std::pow(cfg.jitter_growth, retry - 1);
      m = pristine;
      add_jitter(m, n, jitter);
    }
    if (attempt(m, n, z) == 0) {
      Factor f;
      f.n = n;
      f.L = std::move(m);
      f.applied_jitter = jitter;
      f.zero_prefix = z.prefix;
      f.active = z.active;
      return f;
    }
  }
  throw FactorizationError("factorization failed after jitter escalation", jitter);
}

Factor prepare(const FieldGrid& grid, const QuadratureConfig& quad, const SamplerConfig& cfg) {
  // rebuild rather than copy on retry so peak memory stays one matrix
  double jitter = 0.0;
  for (int retry = 0; retry <= cfg.max_retries; ++retry) {
    std::vector<double> m = build_covariance(grid, quad);
    const ZeroLayout z = find_zero_rows(m, grid.points());
    if (retry > 0) {
      jitter = cfg.jitter_start * std::pow(cfg.jitter_growth, retry - 1);
      add_jitter(m, grid.points(), jitter);
    }
    if (attempt(m, grid.points(), z) == 0) {
      Factor f;
      f.n = grid.points();
      f.L = std::move(m);
      f.applied_jitter = jitter;
      f.zero_prefix = z.prefix;
      f.active = z.active;
      return f;
    }
  }
  throw FactorizationError("factorization failed after jitter escalation", jitter);
}

std::vector<FieldSample> draw(std::shared_ptr<const FieldGrid> grid, const Factor& f,
                              int n, std::uint64_t seed) {
  grid->validate();
  const std::size_t N = grid->points();
  if (f.n != N) throw std::invalid_argument("factor does not match grid");
  if (n < 0) throw std::invalid_argument("need n >= 0");
  std::vector<FieldSample> out{std::size_t(n)};
  constexpr std::size_t B = 8;  // lanes per block
  std::vector<double> xi(N * B), acc(B);
  for (std::size_t k0 = 0; k0 < std::size_t(n); k0 += B) {
    const std::size_t lanes = std::min(B, std::size_t(n) - k0);
    for (std::size_t b = 0; b < lanes; ++b) {
      rng::Stream st(seed, k0 + b);
      for (std::size_t j = 0; j < N; ++j) xi[j * B + b] = st.next_normal();
    }
    for (std::size_t b = lanes; b < B; ++b)
      for (std::size_t j = 0; j < N; ++j) xi[j * B + b] = 0.0;
    for (std::size_t b = 0; b < lanes; ++b) {
      FieldSample& s = out[k0 + b];
      s.grid = grid;
      s.seed = seed;
      s.replicate = std::uint32_t(k0 + b);
      s.values.assign(N, 0.0);
    }
    for (std::size_t i = f.zero_prefix; i < N; ++i) {
      const double* row = f.L.data() + i * N;
      for (std::size_t b = 0; b < B; ++b) acc[b] = 0.0;
      for (std::size_t j = f.zero_prefix; j <= i; ++j) {
        const double lij = row[j];
        const double* xij = xi.data() + j * B;
        for (std::size_t b = 0; b < B; ++b) acc[b] += lij * xij[b];
      }
      for (std::size_t b = 0; b < lanes; ++b) out[k0 + b].values[i] = acc[b];
    }
  }
  return out;
}

std::vector<FieldSample> sample_field(const FieldGrid& grid, int n, std::uint64_t seed,
                                      const QuadratureConfig& quad,
                                      const SamplerConfig& cfg) {
  Factor f = prepare(grid, quad, cfg);
  return draw(std::make_shared<FieldGrid>(grid), f, n, seed);
}

double min_eigen_ratio(const std::vector<double>& m, std::size_t n) {
  if (m.size() != n * n || n == 0) throw std::invalid_argument("matrix size mismatch");
  std::vector<double> a = m;
  std::vector<double> w(n);
  const int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'L', lapack_int(n), a.data(),
                                 lapack_int(n), w.data());
  if (info != 0) throw std::runtime_error("eigenvalue solve failed");
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) tr += m[i * n + i];
  return w[0] / std::max(tr, 1e-300);
}

}  // namespace she::sampler
