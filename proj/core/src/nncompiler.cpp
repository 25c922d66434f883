#include "sortnetc/nncompiler.hpp"

#include <bit>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "sortnetc/error.hpp"

namespace sortnetc {

std::uint64_t hidden_width(std::uint64_t wires) noexcept { return (3 * wires + 1) / 2; }

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorKind::too_large, "parameter count overflows 64 bits");
  }
  return r;
}

std::pair<DenseLayer, DenseLayer> compile_layer(std::size_t wires, const ComparatorLayer& layer,
                                                bool prune) {
  const std::size_t needed = wires + layer.size();
  const std::size_t width = prune ? needed : static_cast<std::size_t>(hidden_width(wires));

  DenseLayer hidden{Matrix(width, wires), std::vector<double>(width, 0.0), Activation::relu};
  DenseLayer output{Matrix(wires, width), std::vector<double>(wires, 0.0), Activation::relu};

  std::vector<bool> busy(wires, false);
  std::size_t neuron = 0;
  for (const Comparator& c : layer) {
    const std::size_t za = neuron++;
    const std::size_t zb = neuron++;
    const std::size_t zc = neuron++;
    hidden.weights(za, c.lo) = 1.0;
    hidden.weights(zb, c.hi) = 1.0;
    hidden.weights(zc, c.hi) = 1.0;
    hidden.weights(zc, c.lo) = -1.0;
    output.weights(c.hi, za) = 1.0;
    output.weights(c.hi, zc) = 1.0;
    output.weights(c.lo, zb) = 1.0;
    output.weights(c.lo, zc) = -1.0;
    busy[c.lo] = busy[c.hi] = true;
  }
  for (std::size_t w = 0; w < wires; ++w) {
    if (busy[w]) continue;
    const std::size_t z = neuron++;
    hidden.weights(z, w) = 1.0;
    output.weights(w, z) = 1.0;
  }
  // remaining rows (unpruned only) stay zero
  return {std::move(hidden), std::move(output)};
}

}  // namespace

DenseNetwork compile(const SortingNetwork& net, bool prune) {
  std::vector<DenseLayer> layers;
  layers.reserve(2 * net.depth());
  for (const auto& layer : net.layers()) {
    auto [hidden, output] = compile_layer(net.wires(), layer, prune);
    layers.push_back(std::move(hidden));
    layers.push_back(std::move(output));
  }
  return DenseNetwork(std::move(layers));
}

DenseNetwork compile_single_comparator() { return compile(make_optimal_small(2), true); }

std::uint64_t feedforward_parameters(std::uint64_t wires, std::uint64_t depth) {
  return checked_mul(checked_mul(checked_mul(2, depth), hidden_width(wires)), wires);
}

std::uint64_t iterative_parameters(std::uint64_t wires) {
  return checked_mul(checked_mul(4, hidden_width(wires)), wires);
}

namespace {

std::string with_commas(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const std::size_t lead = digits.size() % 3;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i != 0 && (i % 3) == lead % 3) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

std::uint64_t positions(std::uint64_t image, std::uint64_t patch, PositionRule rule) {
  switch (rule) {
    case PositionRule::grid_offsets: return checked_mul(image - patch, image - patch);
    case PositionRule::sliding_window: return checked_mul(image - patch + 1, image - patch + 1);
    case PositionRule::stated_formula: return checked_mul(image - 1, image - 1);
  }
  return 0;
}

}  // namespace

ParamScenario estimate_parameters(std::uint64_t image_side, std::uint64_t patch_side,
                                  bool attention, std::optional<std::uint64_t> depth,
                                  PositionRule rule) {
  if (patch_side < 1 || image_side < patch_side) {
    throw Error(ErrorKind::invalid_argument, "need image side >= patch side >= 1");
  }
  ParamScenario s;
  s.image_side = image_side;
  s.patch_side = patch_side;
  s.attention = attention;
  s.position_rule = rule;
  if (attention) {
    const std::uint64_t per_side = image_side / patch_side;
    s.numbers = checked_mul(per_side, per_side);
  } else {
    s.numbers = positions(image_side, patch_side, rule);
  }
  if (s.numbers < 2) {
    throw Error(ErrorKind::invalid_argument,
                "scenario yields fewer than 2 numbers to sort (x=" + std::to_string(s.numbers) + ")");
  }
  s.explicit_depth = depth.has_value();
  s.depth = depth.value_or(static_cast<std::uint64_t>(std::bit_width(s.numbers - 1)));
  s.p_feedforward = feedforward_parameters(s.numbers, s.depth);
  s.p_iterative = iterative_parameters(s.numbers);
  s.p_iterative_depth4 = feedforward_parameters(s.numbers, 4);

  if (!attention) {
    s.warnings.push_back(
        "position count: (N-1)^2 = " + with_commas(positions(image_side, patch_side, PositionRule::stated_formula)) +
        ", sliding window (N-n+1)^2 = " + with_commas(positions(image_side, patch_side, PositionRule::sliding_window)) +
        ", grid offsets (N-n)^2 = " + with_commas(positions(image_side, patch_side, PositionRule::grid_offsets)) +
        "; the published 46,656 for N=224, n=8 equals (N-n)^2");
  }
  const bool headline = image_side == 224 && patch_side == 8 && rule == PositionRule::grid_offsets;
  if (headline && !attention && s.depth == 16) {
    const std::uint64_t alt = feedforward_parameters(36'864, 16);
    s.warnings.push_back("published no-attention figure '65.3 billion' does not match x=46,656 (p=" +
                         with_commas(s.p_feedforward) + "); it matches x=36,864=192^2 with d=16 (p=" +
                         with_commas(alt) + ")");
  }
  if (headline) {
    s.warnings.push_back(std::string("published iterative figure '") +
                         (attention ? "7.3 million" : "26.1 billion") +
                         "' equals 2 x 4*ceil(1.5x)*x = " + with_commas(s.p_iterative_depth4) +
                         " (a depth-4 feed-forward count); 4*ceil(1.5x)*x itself is " +
                         with_commas(s.p_iterative));
  }
  return s;
}

void to_json(nlohmann::json& j, const ParamScenario& s) {
  const char* rule = s.position_rule == PositionRule::grid_offsets     ? "grid_offsets"
                     : s.position_rule == PositionRule::sliding_window ? "sliding_window"
                                                                       : "stated_formula";
  j = nlohmann::json{{"image_side", s.image_side},
                     {"patch_side", s.patch_side},
                     {"attention", s.attention},
                     {"position_rule", rule},
                     {"x", s.numbers},
                     {"d", s.depth},
                     {"depth_rule", s.explicit_depth ? "explicit" : "info_theoretic_ceil"},
                     {"p_feedforward", s.p_feedforward},
                     {"p_iterative", s.p_iterative},
                     {"p_iterative_depth4", s.p_iterative_depth4},
                     {"warnings", s.warnings}};
}

}  // namespace sortnetc
