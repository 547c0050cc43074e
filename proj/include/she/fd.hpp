#pragma once

#include <cstdint>
#include <vector>

#include "she/grid.hpp"

namespace she::fd {

struct FdConfig {
  double half_width = 0.0;  // 0 = auto: max(8, |x|_max + 8 sqrt(t_max))
  bool zero_noise = false;  // integrate the deterministic equation instead
};

// Crank-Nicolson mollified-noise integrator on [-L, L] with zero boundary,
// recording at the requested grid points. Requested times must be multiples of
// the computational step grid.dt, requested spaces multiples of grid.dx and
// aligned with the computational mesh. Requires grid.dt <= grid.dx^2.
// Replicate k depends only on (seed, k).
std::vector<FieldSample> fd_integrate(const FieldGrid& grid, int n, std::uint64_t seed,
                                      const FdConfig& cfg = {});

}  // namespace she::fd
