#pragma once

#include <cstdint>
#include <random>

namespace kmboot {

// SplitMix64 step. Used to turn (seed, stream, index) triples into
// well-separated engine seeds for per-replicate sub-streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= stream + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h = splitmix64(s);
  s ^= index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return splitmix64(s);
}

// Deterministic random stream. mt19937_64 output is fully specified by the
// standard; the bounded/unit draws below avoid std::*_distribution, whose
// results are implementation-defined, so sequences are identical across
// platforms and thread schedules.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : engine_(mix_seed(seed, stream, index)) {}

  std::uint64_t next() { return engine_(); }

  // Unbiased draw from {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // 53-bit uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1); rejects the atom at 0.
  double unit_open() {
    double u = unit();
    while (u == 0.0) u = unit();
    return u;
  }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kmboot
