#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fnlayout {

std::uint64_t splitmix64(std::uint64_t x);

// Derives the key of a child recursion node. Keys depend only on the path
// from the root, never on scheduling.
inline std::uint64_t child_key(std::uint64_t parent, unsigned side) {
  return splitmix64(parent ^ (0x9e3779b97f4a7c15ULL * (side + 1)));
}

// mt19937_64 with portable bounded draws; std::uniform_int_distribution is
// implementation-defined, which would make layouts differ across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fnlayout
