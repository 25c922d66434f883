#include "sortnetc/sortnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "sortnetc/error.hpp"
#include "sortnetc/parallel.hpp"
#include "sortnetc/rng.hpp"

namespace sortnetc {

SortingNetwork::SortingNetwork(std::size_t wires, std::vector<ComparatorLayer> layers)
    : wires_(wires), layers_(std::move(layers)) {
  if (wires_ == 0) throw Error(ErrorKind::invalid_network, "network needs at least one wire");
  if (layers_.empty()) throw Error(ErrorKind::invalid_network, "network needs at least one layer");
  std::vector<std::size_t> touched(wires_, 0);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    for (const Comparator& c : layers_[l]) {
      if (c.lo >= c.hi || c.hi >= wires_) {
        throw Error(ErrorKind::invalid_network,
                    "layer " + std::to_string(l) + ": bad comparator (" + std::to_string(c.lo) +
                        "," + std::to_string(c.hi) + ") for " + std::to_string(wires_) + " wires");
      }
      // touched[w] stores the last layer (1-based) that used wire w
      for (std::size_t w : {c.lo, c.hi}) {
        if (touched[w] == l + 1) {
          throw Error(ErrorKind::invalid_network, "layer " + std::to_string(l) + ": wire " +
                                                      std::to_string(w) + " used twice");
        }
        touched[w] = l + 1;
      }
    }
  }
}

std::size_t SortingNetwork::comparator_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.size();
  return n;
}

void SortingNetwork::apply_in_place(std::span<double> values) const {
  if (values.size() != wires_) {
    throw Error(ErrorKind::length_mismatch, "expected " + std::to_string(wires_) +
                                                " values, got " + std::to_string(values.size()));
  }
  for (const auto& layer : layers_) {
    for (const Comparator& c : layer) {
      if (values[c.hi] < values[c.lo]) std::swap(values[c.lo], values[c.hi]);
    }
  }
}

std::vector<double> SortingNetwork::apply(std::span<const double> values) const {
  std::vector<double> out(values.begin(), values.end());
  apply_in_place(out);
  return out;
}

std::vector<std::vector<double>> SortingNetwork::trace(std::span<const double> values) const {
  if (values.size() != wires_) {
    throw Error(ErrorKind::length_mismatch, "expected " + std::to_string(wires_) +
                                                " values, got " + std::to_string(values.size()));
  }
  std::vector<std::vector<double>> states;
  states.emplace_back(values.begin(), values.end());
  for (const auto& layer : layers_) {
    std::vector<double> next = states.back();
    for (const Comparator& c : layer) {
      if (next[c.hi] < next[c.lo]) std::swap(next[c.lo], next[c.hi]);
    }
    states.push_back(std::move(next));
  }
  return states;
}

std::uint64_t SortingNetwork::apply_bits(std::uint64_t bits) const noexcept {
  for (const auto& layer : layers_) {
    for (const Comparator& c : layer) {
      // a one on lo above a zero on hi is the only out-of-order case
      const std::uint64_t lo_bit = (bits >> c.lo) & 1U;
      const std::uint64_t hi_bit = (bits >> c.hi) & 1U;
      if (lo_bit > hi_bit) bits ^= (std::uint64_t{1} << c.lo) | (std::uint64_t{1} << c.hi);
    }
  }
  return bits;
}

SortingNetwork make_optimal_small(std::size_t wires) {
  switch (wires) {
    case 2:
      return SortingNetwork(2, {{{0, 1}}});
    case 3:
      return SortingNetwork(3, {{{0, 1}}, {{1, 2}}, {{0, 1}}});
    case 4:
      return SortingNetwork(4, {{{0, 2}, {1, 3}}, {{0, 1}, {2, 3}}, {{1, 2}}});
    default:
      throw Error(ErrorKind::unsupported_size,
                  "optimal networks are only available for 2..4 wires, got " +
                      std::to_string(wires));
  }
}

SortingNetwork make_merge_network(std::size_t wires) {
  if (wires < 2) throw Error(ErrorKind::unsupported_size, "merge network needs at least 2 wires");
  const std::size_t n = wires;
  std::vector<ComparatorLayer> layers;
  for (std::size_t p = 1; p < n; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      ComparatorLayer layer;
      for (std::size_t j = k % p; j + k < n; j += 2 * k) {
        for (std::size_t i = 0; i < std::min(k, n - j - k); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) layer.push_back({i + j, i + j + k});
        }
      }
      if (!layer.empty()) layers.push_back(std::move(layer));
    }
  }
  return SortingNetwork(n, std::move(layers));
}

SortingNetwork make_brick_network(std::size_t wires) {
  if (wires < 2) throw Error(ErrorKind::unsupported_size, "brick network needs at least 2 wires");
  ComparatorLayer even;
  ComparatorLayer odd;
  for (std::size_t i = 0; i + 1 < wires; i += 2) even.push_back({i, i + 1});
  for (std::size_t i = 1; i + 1 < wires; i += 2) odd.push_back({i, i + 1});
  return SortingNetwork(wires, {std::move(even), std::move(odd)});
}

SortingNetwork repeat_network(const SortingNetwork& net, std::size_t times) {
  if (times == 0) throw Error(ErrorKind::invalid_argument, "repeat count must be >= 1");
  std::vector<ComparatorLayer> layers;
  layers.reserve(net.depth() * times);
  for (std::size_t t = 0; t < times; ++t) {
    layers.insert(layers.end(), net.layers().begin(), net.layers().end());
  }
  return SortingNetwork(net.wires(), std::move(layers));
}

bool is_sorted_ascending(std::span<const double> values) noexcept {
  return std::is_sorted(values.begin(), values.end());
}

namespace {

std::vector<int> unpack_bits(std::uint64_t bits, std::size_t wires) {
  std::vector<int> v(wires);
  for (std::size_t i = 0; i < wires; ++i) v[i] = static_cast<int>((bits >> i) & 1U);
  return v;
}

// Ascending binary output: all ones on the highest wires.
bool bits_sorted(std::uint64_t bits, std::size_t wires) noexcept {
  const auto ones = static_cast<std::size_t>(std::popcount(bits));
  const std::uint64_t all = wires == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << wires) - 1;
  const std::uint64_t zeros_mask = (std::uint64_t{1} << (wires - ones)) - 1;
  return bits == (all & ~zeros_mask);
}

}  // namespace

VerificationReport verify_zero_one(const SortingNetwork& net, std::size_t cap) {
  const std::size_t wires = net.wires();
  if (wires > cap || wires > 63) {
    throw Error(ErrorKind::too_many_wires, std::to_string(wires) +
                                               " wires exceeds the exhaustive cap of " +
                                               std::to_string(std::min<std::size_t>(cap, 63)));
  }
  const std::uint64_t total = std::uint64_t{1} << wires;
  constexpr std::uint64_t kChunk = 1U << 14;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;

  std::mutex m;
  std::uint64_t first_failure = std::numeric_limits<std::uint64_t>::max();
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min(total, begin + kChunk);
    for (std::uint64_t v = begin; v < end; ++v) {
      if (!bits_sorted(net.apply_bits(v), wires)) {
        std::lock_guard lock(m);
        first_failure = std::min(first_failure, v);
        return;
      }
    }
  });

  VerificationReport report;
  report.vectors_tested = total;
  report.passed = first_failure == std::numeric_limits<std::uint64_t>::max();
  if (!report.passed) report.counterexample = unpack_bits(first_failure, wires);
  return report;
}

VerificationReport verify_network(const SortingNetwork& net, const VerifyOptions& options) {
  if (net.wires() <= options.exhaustive_cap && net.wires() <= 63) {
    return verify_zero_one(net, options.exhaustive_cap);
  }
  VerificationReport report;
  report.probabilistic = true;
  report.passed = true;
  Rng rng(options.seed);
  std::vector<double> values(net.wires());
  for (std::uint64_t t = 0; t < options.random_vectors; ++t) {
    for (double& v : values) v = rng.bit() ? 1.0 : 0.0;
    const std::vector<double> input = values;
    net.apply_in_place(values);
    ++report.vectors_tested;
    if (!is_sorted_ascending(values)) {
      report.passed = false;
      std::vector<int> witness(input.size());
      std::transform(input.begin(), input.end(), witness.begin(),
                     [](double d) { return static_cast<int>(d); });
      report.counterexample = std::move(witness);
      break;
    }
  }
  return report;
}

DepthBound depth_bounds(std::size_t wires) {
  if (wires < 2) throw Error(ErrorKind::unsupported_size, "depth bounds need at least 2 wires");
  DepthBound b;
  b.info_theoretic = std::log2(static_cast<double>(wires));
  b.kahale = kKahaleConstant * b.info_theoretic;
  // exact integer ceil(log2 x): smallest d with 2^d >= x
  b.chosen_depth = static_cast<std::size_t>(std::bit_width(wires - 1));
  return b;
}

void to_json(nlohmann::json& j, const SortingNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers()) {
    nlohmann::json l = nlohmann::json::array();
    for (const Comparator& c : layer) l.push_back({c.lo, c.hi});
    layers.push_back(std::move(l));
  }
  j = nlohmann::json{{"wires", net.wires()}, {"layers", std::move(layers)}};
}

SortingNetwork network_from_json(const nlohmann::json& j) {
  try {
    const auto wires = j.at("wires").get<std::size_t>();
    std::vector<ComparatorLayer> layers;
    for (const auto& l : j.at("layers")) {
      ComparatorLayer layer;
      for (const auto& c : l) {
        if (!c.is_array() || c.size() != 2) {
          throw Error(ErrorKind::parse_error, "comparator must be a [lo, hi] pair");
        }
        layer.push_back({c[0].get<std::size_t>(), c[1].get<std::size_t>()});
      }
      layers.push_back(std::move(layer));
    }
    return SortingNetwork(wires, std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("network json: ") + e.what());
  }
}

}  // namespace sortnetc
