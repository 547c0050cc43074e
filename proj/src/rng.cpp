#include "she/rng.hpp"

#include <cmath>

namespace she::rng {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 256-layer ziggurat tables for exp(-x^2/2). Layer areas are all equal; the
// base layer holds the tail beyond R plus a rectangle of matching area.
constexpr double ZR = 3.6541528853610088;

struct ZigTables {
  double x[258];  // x[1] = R down to x[256] = 0; x[0] = V/f(R) pseudo-width
  double y[256];  // y[i] = exp(-x[i+1]^2/2) boundary heights, y[255] = 1
  ZigTables() {
    const double fr = std::exp(-0.5 * ZR * ZR);
    const double tail = std::sqrt(3.14159265358979323846 / 2.0) * std::erfc(ZR / std::sqrt(2.0));
    const double V = ZR * fr + tail;
    x[1] = ZR;
    x[0] = V / fr;
    y[0] = fr;
    for (int i = 1; i <= 254; ++i) {
      y[i] = y[i - 1] + V / x[i];
      x[i + 1] = std::sqrt(-2.0 * std::log(y[i]));
    }
    y[255] = 1.0;
    x[256] = 0.0;
    x[257] = 0.0;
  }
};

const ZigTables zig;

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t a = mix(seed);
  std::uint64_t b = mix(k + 0x632be59bd9b4e019ULL);
  std::uint64_t st = a ^ rotl(b, 31);
  for (auto& w : s_) {
    st += 0x9e3779b97f4a7c15ULL;
    w = mix(st);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Stream::next_u64() {
  const std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return r;
}

double Stream::next_uniform() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_normal() {
  for (;;) {
    const std::uint64_t u = next_u64();
    const int i = int(u & 255);
    const bool neg = (u >> 8) & 1;
    const double ux = double(u >> 11) * 0x1.0p-53;
    const double cand = ux * zig.x[i == 0 ? 0 : i];
    if (cand < zig.x[i + 1]) return neg ? -cand : cand;
    if (i == 0) {
      // tail beyond R, Marsaglia rejection
      for (;;) {
        const double u1 = (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        const double xx = -std::log(u1) / ZR;
        const double yy = -std::log(u2);
        if (yy + yy >= xx * xx) return neg ? -(ZR + xx) : (ZR + xx);
      }
    }
    const double ylo = zig.y[i - 1];
    const double yv = ylo + (zig.y[i] - ylo) * next_uniform();
    if (yv < std::exp(-0.5 * cand * cand)) return neg ? -cand : cand;
  }
}

}  // namespace she::rng
