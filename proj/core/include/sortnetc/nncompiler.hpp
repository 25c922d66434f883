#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sortnetc/nnruntime.hpp"
#include "sortnetc/sortnet.hpp"

namespace sortnetc {

/// ceil(1.5 x), the hidden width of one compiled sorting layer.
std::uint64_t hidden_width(std::uint64_t wires) noexcept;

/// Lowers a sorting network to a bias-free ReLU network. Every sorting
/// layer becomes two dense layers:
///
///   hidden: per comparator (lo, hi)  z_a = relu(x_lo), z_b = relu(x_hi),
///                                    z_c = relu(x_hi - x_lo)
///           per idle wire w          z_w = relu(x_w)
///   output: y_hi = z_a + z_c (max), y_lo = z_b - z_c (min), y_w = z_w
///
/// Unpruned layers are padded with dead neurons to ceil(1.5x) so the weight
/// count is exactly 2 d ceil(1.5x) x. Pruned layers keep x + k neurons for
/// k comparators. Correct only for nonnegative inputs.
DenseNetwork compile(const SortingNetwork& net, bool prune);

/// The 2-3-2 comparator gadget: 12 weights, output (min, max).
DenseNetwork compile_single_comparator();

/// Weight count of a compiled feed-forward sorter: 2 d ceil(1.5x) x.
/// Throws ErrorKind::too_large on 64-bit overflow.
std::uint64_t feedforward_parameters(std::uint64_t wires, std::uint64_t depth);

/// Weight count of the compiled brick network reused iteratively: 4 ceil(1.5x) x.
std::uint64_t iterative_parameters(std::uint64_t wires);

/// How the no-attention position count is derived from N and n.
enum class PositionRule {
  grid_offsets,    // (N - n)^2; reproduces the 46,656 headline value
  sliding_window,  // (N - n + 1)^2
  stated_formula,  // (N - 1)^2
};

struct ParamScenario {
  std::uint64_t image_side = 0;
  std::uint64_t patch_side = 0;
  bool attention = false;
  PositionRule position_rule = PositionRule::grid_offsets;
  std::uint64_t numbers = 0;  // x
  std::uint64_t depth = 0;    // d
  bool explicit_depth = false;
  std::uint64_t p_feedforward = 0;
  std::uint64_t p_iterative = 0;
  /// Iterative network counted as a depth-4 feed-forward sorter, i.e. twice
  /// p_iterative. This is what the published iterative figures equal.
  std::uint64_t p_iterative_depth4 = 0;
  std::vector<std::string> warnings;
};

/// depth: explicit depth, or nullopt for ceil(log2 x).
ParamScenario estimate_parameters(std::uint64_t image_side, std::uint64_t patch_side,
                                  bool attention, std::optional<std::uint64_t> depth,
                                  PositionRule rule = PositionRule::grid_offsets);

void to_json(nlohmann::json& j, const ParamScenario& s);

}  // namespace sortnetc
