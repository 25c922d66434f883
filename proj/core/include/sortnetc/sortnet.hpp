#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sortnetc {

/// Compare-exchange between two wires. After it fires, wire `lo` holds the
/// smaller value and wire `hi` the larger one (ascending convention).
struct Comparator {
  std::size_t lo = 0;
  std::size_t hi = 0;

  friend bool operator==(const Comparator&, const Comparator&) = default;
};

using ComparatorLayer = std::vector<Comparator>;

/// Immutable comparator network. Construction validates that every
/// comparator has lo < hi < wires and that no wire is touched twice in a
/// layer. Layers may be empty, but there is always at least one.
class SortingNetwork {
 public:
  SortingNetwork(std::size_t wires, std::vector<ComparatorLayer> layers);

  [[nodiscard]] std::size_t wires() const noexcept { return wires_; }
  [[nodiscard]] std::size_t depth() const noexcept { return layers_.size(); }
  [[nodiscard]] const std::vector<ComparatorLayer>& layers() const noexcept { return layers_; }
  [[nodiscard]] std::size_t comparator_count() const noexcept;

  /// Runs the network over a copy of `values`.
  [[nodiscard]] std::vector<double> apply(std::span<const double> values) const;
  void apply_in_place(std::span<double> values) const;

  /// Wire state after each layer; element 0 is the input itself.
  [[nodiscard]] std::vector<std::vector<double>> trace(std::span<const double> values) const;

  /// Runs the network on a binary vector packed into the low `wires()` bits
  /// (bit i = wire i). Requires wires() <= 64.
  [[nodiscard]] std::uint64_t apply_bits(std::uint64_t bits) const noexcept;

  friend bool operator==(const SortingNetwork&, const SortingNetwork&) = default;

 private:
  std::size_t wires_;
  std::vector<ComparatorLayer> layers_;
};

/// Hardcoded minimal networks for 2, 3 and 4 wires.
SortingNetwork make_optimal_small(std::size_t wires);

/// Batcher's odd-even merge sort generalized to arbitrary sizes. Each
/// (block, stride) pass becomes one layer.
SortingNetwork make_merge_network(std::size_t wires);

/// Two-layer odd-even transposition network: layer one pairs (0,1),(2,3),...
/// and layer two pairs (1,2),(3,4),... Sorts when applied repeatedly.
SortingNetwork make_brick_network(std::size_t wires);

/// The network applied `times` times back to back, as one network.
SortingNetwork repeat_network(const SortingNetwork& net, std::size_t times);

struct VerificationReport {
  bool passed = false;
  /// True when the check was randomized instead of exhaustive.
  bool probabilistic = false;
  std::uint64_t vectors_tested = 0;
  /// First failing binary vector in enumeration order, when one exists.
  std::optional<std::vector<int>> counterexample;
};

inline constexpr std::size_t kDefaultZeroOneCap = 22;

/// Exhaustive zero-one check over all 2^wires binary vectors.
/// Throws ErrorKind::too_many_wires above `cap` (cap itself is at most 63).
VerificationReport verify_zero_one(const SortingNetwork& net,
                                   std::size_t cap = kDefaultZeroOneCap);

struct VerifyOptions {
  std::size_t exhaustive_cap = kDefaultZeroOneCap;
  std::uint64_t random_vectors = 100'000;
  std::uint64_t seed = 0;
};

/// Exhaustive when wires <= exhaustive_cap, otherwise checks
/// `random_vectors` random binary vectors and marks the report probabilistic.
VerificationReport verify_network(const SortingNetwork& net, const VerifyOptions& options = {});

[[nodiscard]] bool is_sorted_ascending(std::span<const double> values) noexcept;

struct DepthBound {
  double info_theoretic = 0.0;  // log2 x
  double kahale = 0.0;          // 3.27 log2 x, leading term only
  std::size_t chosen_depth = 0; // ceil(log2 x)
};

inline constexpr double kKahaleConstant = 3.27;

DepthBound depth_bounds(std::size_t wires);

void to_json(nlohmann::json& j, const SortingNetwork& net);
SortingNetwork network_from_json(const nlohmann::json& j);

}  // namespace sortnetc
