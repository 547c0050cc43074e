#include "she/fd.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "she/common.hpp"
#include "she/rng.hpp"

namespace she::fd {

namespace {

constexpr std::size_t B = 8;  // replicate lanes advanced together

struct Mesh {
  double L = 0.0, dx = 0.0, dt = 0.0;
  std::size_t m = 0;      // interior nodes
  std::size_t steps = 0;  // time steps to t_max
  std::vector<std::size_t> node_of_space;  // requested space -> interior node
  std::vector<std::size_t> step_of_time;   // requested time -> step index
};

Mesh plan(const FieldGrid& grid, const FdConfig& cfg) {
  grid.validate();
  if (!(grid.dt > 0.0) && grid.nt() > 1)
    throw ConfigError("integrator needs a uniform time step");
  if (!(grid.dx > 0.0) && grid.nx() > 1)
    throw ConfigError("integrator needs a uniform space step");
  Mesh mesh;
  mesh.dt = grid.dt > 0.0 ? grid.dt : grid.times.back();
  mesh.dx = grid.dx > 0.0 ? grid.dx : 0.125;
  if (mesh.dt <= 0.0) throw ConfigError("integrator needs t_max > 0");
  if (mesh.dt > mesh.dx * mesh.dx + 1e-15)
    throw ConfigError("integrator needs dt <= dx^2");
  const double t_max = grid.times.back();
  const double x_abs = std::max(std::abs(grid.spaces.front()), std::abs(grid.spaces.back()));
  double L = cfg.half_width > 0.0 ? cfg.half_width
                                  : std::max(8.0, x_abs + 8.0 * std::sqrt(t_max));
  // snap the half-width up so the boundary lies on the mesh and x = 0 is a node
  const auto cells = 2 * std::size_t(std::ceil(L / mesh.dx - 1e-9));
  L = 0.5 * double(cells) * mesh.dx;
  if (cells < 3) throw ConfigError("integrator domain too small");
  mesh.L = L;
  mesh.m = cells - 1;
  mesh.steps = std::size_t(std::llround(t_max / mesh.dt));
  if (std::abs(double(mesh.steps) * mesh.dt - t_max) > 1e-9 * t_max)
    throw ConfigError("t_max must be a multiple of dt");
  mesh.step_of_time.reserve(grid.nt());
  for (double t : grid.times) {
    const auto k = std::size_t(std::llround(t / mesh.dt));
    if (std::abs(double(k) * mesh.dt - t) > 1e-9 * std::max(t, mesh.dt))
      throw ConfigError("requested times must be multiples of dt");
    mesh.step_of_time.push_back(k);
  }
  mesh.node_of_space.reserve(grid.nx());
  for (double x : grid.spaces) {
    const double off = (x + mesh.L) / mesh.dx;  // boundary node is index 0
    const auto j = std::size_t(std::llround(off));
    if (std::abs(double(j) * mesh.dx - (x + mesh.L)) > 1e-9 * std::max(1.0, std::abs(x)))
      throw ConfigError("requested spaces must lie on the dx mesh");
    if (j == 0 || j > mesh.m)
      throw ConfigError("requested space outside the integrator domain");
    mesh.node_of_space.push_back(j - 1);  // interior index
  }
  return mesh;
}

}  // namespace

std::vector<FieldSample> fd_integrate(const FieldGrid& grid, int n, std::uint64_t seed,
                                      const FdConfig& cfg) {
  if (n < 0) throw std::invalid_argument("need n >= 0");
  const Mesh mesh = plan(grid, cfg);
  const std::size_t m = mesh.m;
  const double r = mesh.dt / (4.0 * mesh.dx * mesh.dx);
  const double noise_scale = cfg.zero_noise ? 0.0 : std::sqrt(mesh.dt / mesh.dx);

  // Thomas factorization of I - r T, T the second-difference matrix; the
  // matrix is constant so multipliers and pivot reciprocals are precomputed.
  std::vector<double> inv_piv(m), mult(m);
  {
    double piv = 1.0 + 2.0 * r;
    inv_piv[0] = 1.0 / piv;
    for (std::size_t j = 1; j < m; ++j) {
      mult[j] = -r * inv_piv[j - 1];
      piv = 1.0 + 2.0 * r + r * mult[j];
      inv_piv[j] = 1.0 / piv;
    }
  }

  auto shared_grid = std::make_shared<FieldGrid>(grid);
  std::vector<FieldSample> out{std::size_t(n)};
  std::vector<double> u(m * B), rhs(m * B);

  for (std::size_t k0 = 0; k0 < std::size_t(n); k0 += B) {
    const std::size_t lanes = std::min(B, std::size_t(n) - k0);
    std::vector<rng::Stream> st;
    st.reserve(lanes);
    for (std::size_t b = 0; b < lanes; ++b) st.emplace_back(seed, k0 + b);
    for (std::size_t b = 0; b < lanes; ++b) {
      FieldSample& s = out[k0 + b];
      s.grid = shared_grid;
      s.seed = seed;
      s.replicate = std::uint32_t(k0 + b);
      s.values.assign(grid.points(), 0.0);
    }
    std::fill(u.begin(), u.end(), 0.0);

    auto record = [&](std::size_t step) {
      for (std::size_t ti = 0; ti < grid.nt(); ++ti) {
        if (mesh.step_of_time[ti] != step) continue;
        for (std::size_t b = 0; b < lanes; ++b) {
          double* dst = out[k0 + b].values.data() + ti * grid.nx();
          for (std::size_t xi = 0; xi < grid.nx(); ++xi)
            dst[xi] = u[mesh.node_of_space[xi] * B + b];
        }
      }
    };
    record(0);

    for (std::size_t step = 1; step <= mesh.steps; ++step) {
      // explicit half plus noise
      for (std::size_t j = 0; j < m; ++j) {
        const double* uj = u.data() + j * B;
        const double* um = j > 0 ? u.data() + (j - 1) * B : nullptr;
        const double* up = j + 1 < m ? u.data() + (j + 1) * B : nullptr;
        double* rj = rhs.data() + j * B;
        for (std::size_t b = 0; b < B; ++b) {
          const double lo = um ? um[b] : 0.0;
          const double hi = up ? up[b] : 0.0;
          rj[b] = uj[b] + r * (lo - 2.0 * uj[b] + hi);
        }
        if (noise_scale != 0.0)
          for (std::size_t b = 0; b < lanes; ++b)
            rj[b] += noise_scale * st[b].next_normal();
      }
      // implicit half: forward elimination then back substitution
      for (std::size_t j = 1; j < m; ++j) {
        const double* prev = rhs.data() + (j - 1) * B;
        double* rj = rhs.data() + j * B;
        const double mj = mult[j];
        for (std::size_t b = 0; b < B; ++b) rj[b] -= mj * prev[b];
      }
      {
        double* un = u.data() + (m - 1) * B;
        const double* rn = rhs.data() + (m - 1) * B;
        const double ip = inv_piv[m - 1];
        for (std::size_t b = 0; b < B; ++b) un[b] = rn[b] * ip;
      }
      for (std::size_t j = m - 1; j-- > 0;) {
        double* uj = u.data() + j * B;
        const double* rj = rhs.data() + j * B;
        const double* up = u.data() + (j + 1) * B;
        const double ip = inv_piv[j];
        for (std::size_t b = 0; b < B; ++b) uj[b] = (rj[b] + r * up[b]) * ip;
      }
      record(step);
    }
  }
  return out;
}

}  // namespace she::fd
