#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace topk {

// splitmix64 finalizer. Used to derive independent stream seeds from a master
// seed so that results never depend on evaluation order.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mix(seed, a) = splitmix64(seed XOR splitmix64(a)).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) noexcept {
  return splitmix64(seed ^ splitmix64(a));
}

// Seed of the stream for walk `walk_index` from start node `start`.
constexpr std::uint64_t walk_stream_seed(std::uint64_t seed, std::uint64_t start,
                                         std::uint64_t walk_index) noexcept {
  return mix_seed(mix_seed(seed, start), walk_index);
}

// Thin wrapper over mt19937_64. The engine's output sequence is fixed by the
// standard; the helpers below avoid std:: distributions, whose output differs
// between standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates, back to front.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace topk
