#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sortnetc {

/// Identifier embedded in every manifest and report that depends on
/// randomness. Bump it whenever the stream derivation or any of the
/// distribution helpers below changes.
inline constexpr std::string_view kRngName = "sortnetc-rng-v1 (mt19937_64, splitmix64 substreams)";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the substream for item `index` under master `seed`. Substreams
/// are what make parallel generation byte-identical to serial generation.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Deterministic generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all distributions are implemented here
/// instead of using <random> distributions, which are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t index) : engine_(substream_seed(seed, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  bool bit() { return (engine_() >> 63) != 0; }

  /// Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sortnetc
