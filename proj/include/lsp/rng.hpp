#pragma once
// Deterministic, stream-splittable RNG. A given (seed, stream) pair yields a
// bit-identical sequence on every run, independent of thread scheduling, so
// parallel replications stay reproducible. Core generator is xoshiro256++
// seeded through splitmix64; no std:: distributions are used anywhere because
// their output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace lsp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds a component into a stream id (order-sensitive, collision-resistant).
inline std::uint64_t mix_stream(std::uint64_t stream, std::uint64_t component) {
  std::uint64_t st = stream ^ (0xd2b74407b1ce6e93ULL * (component + 0x632be59bd9b4e019ULL));
  return splitmix64(st);
}

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  [[nodiscard]] RngSeed derive(std::uint64_t component) const {
    return RngSeed{seed, mix_stream(stream, component)};
  }
  [[nodiscard]] RngSeed derive(std::initializer_list<std::uint64_t> components) const {
    RngSeed out = *this;
    for (std::uint64_t c : components) out = out.derive(c);
    return out;
  }
};

class Rng {
 public:
  explicit Rng(RngSeed key) : Rng(key.seed, key.stream) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t st = seed;
    (void)splitmix64(st);
    st ^= 0xd2b74407b1ce6e93ULL * (stream + 0x632be59bd9b4e019ULL);
    for (auto& word : state_) word = splitmix64(st);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe to pass through log().
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Unbiased integer on [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // 0..n-1 in shuffled order.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx);
    return idx;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace lsp
