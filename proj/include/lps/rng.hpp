#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "lps/errors.hpp"

namespace lps {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Order-sensitive absorb-and-finalize hashing, used to derive
// independent per-run seeds from (master seed, run coordinates).
inline std::uint64_t hash_absorb(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return splitmix64(h);
}

inline std::uint64_t hash_absorb(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) h = hash_absorb(h, c);
  return hash_absorb(h, 0x5f5e100ull + s.size());
}

inline std::uint64_t derive_seed(std::uint64_t master) { return hash_absorb(master, 1); }

template <typename First, typename... Rest>
std::uint64_t derive_seed(std::uint64_t master, First&& first, Rest&&... rest) {
  return derive_seed(hash_absorb(master, std::forward<First>(first)),
                     std::forward<Rest>(rest)...);
}

// mt19937_64 with hand-rolled distributions. The standard engines are
// bit-exact across implementations but std::uniform_*_distribution is
// not, and reproducibility across toolchains is part of the contract.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw invalid_argument_error("below(0)");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t v = gen_();
      if (v < limit) return v % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      using std::swap;
      swap(v[i - 1], v[index(i)]);
    }
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace lps
