#ifndef KGCODE_RANDOM_HPP
#define KGCODE_RANDOM_HPP

#include <cstdint>
#include <random>

namespace kgcode {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

inline std::uint64_t between(std::mt19937_64& rng, std::uint64_t lo,
                             std::uint64_t hi) {
  return lo + below(rng, hi - lo + 1);
}

}  // namespace kgcode

#endif  // KGCODE_RANDOM_HPP
