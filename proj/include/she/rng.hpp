#pragma once

#include <cstdint>

namespace she::rng {

// Counter-based stream: replicate k of master seed s gets its own generator,
// independent of draw order and thread layout. xoshiro256++ state seeded via
// splitmix-style mixing. Hand-rolled so output bytes are identical on every
// platform and standard library.
class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t k);

  std::uint64_t next_u64();
  // uniform on [0,1), 53 bits
  double next_uniform();
  // standard normal via 256-layer ziggurat
  double next_normal();

private:
  std::uint64_t s_[4];
};

}  // namespace she::rng
