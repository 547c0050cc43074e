#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "she/grid.hpp"
#include "she/quadrature.hpp"

namespace she::sampler {

struct SamplerConfig {
  double jitter_start = 1e-10;  // relative diagonal boost on the first retry
  double jitter_growth = 10.0;
  int max_retries = 6;
};

// Lower-triangular factor of the (possibly jittered) covariance, row-major in
// full square storage. Rows with exactly zero variance stay zero.
struct Factor {
  std::size_t n = 0;
  std::vector<double> L;
  double applied_jitter = 0.0;  // relative diagonal boost that succeeded
  std::size_t zero_prefix = 0;
  std::vector<std::uint32_t> active;  // indices factored (scattered-zero case only)
};

// Dense covariance of the field on the grid, row-major over flattened points
// p = time_index * nx + space_index; symmetric by construction.
std::vector<double> build_covariance(const FieldGrid& grid, const QuadratureConfig& quad);

// Cholesky with geometric jitter escalation. Keeps a pristine copy for retries
// when the matrix is small enough; very large inputs get the no-jitter attempt
// only and failures propagate as FactorizationError.
Factor factor_psd(std::vector<double> m, std::size_t n, const SamplerConfig& cfg);

// build_covariance + factor_psd, rebuilding instead of copying on retry
Factor prepare(const FieldGrid& grid, const QuadratureConfig& quad, const SamplerConfig& cfg);

// n exact draws of the field; replicate k is a deterministic function of
// (seed, k) alone regardless of batching or thread count.
std::vector<FieldSample> draw(std::shared_ptr<const FieldGrid> grid, const Factor& f,
                              int n, std::uint64_t seed);

std::vector<FieldSample> sample_field(const FieldGrid& grid, int n, std::uint64_t seed,
                                      const QuadratureConfig& quad = {},
                                      const SamplerConfig& cfg = {});

// min eigenvalue / trace of a small symmetric matrix, for PSD spot checks
double min_eigen_ratio(const std::vector<double>& m, std::size_t n);

}  // namespace she::sampler
