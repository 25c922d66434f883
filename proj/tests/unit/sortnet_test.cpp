#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sortnetc/sortnet.hpp"
#include "test_support.hpp"

using namespace sortnetc;
using testsupport::binary_vector;
using testsupport::sorted_copy;

namespace {

// Exhaustive oracle independent of apply_bits: every binary vector through
// the real-valued apply, compared with a comparison sort.
bool sorts_all_binary(const SortingNetwork& net) {
  const std::size_t x = net.wires();
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << x); ++b) {
    const auto v = binary_vector(b, x);
    if (net.apply(v) != sorted_copy(v)) return false;
  }
  return true;
}

SortingNetwork random_network(std::mt19937_64& gen, std::size_t wires, std::size_t depth) {
  std::vector<ComparatorLayer> layers;
  for (std::size_t l = 0; l < depth; ++l) {
    std::vector<std::size_t> order(wires);
    for (std::size_t i = 0; i < wires; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), gen);
    ComparatorLayer layer;
    for (std::size_t i = 0; i + 1 < wires; i += 2) {
      if (gen() % 3 == 0) continue;
      layer.push_back({std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1])});
    }
    layers.push_back(std::move(layer));
  }
  return SortingNetwork(wires, std::move(layers));
}

}  // namespace

TEST(OptimalSmall, ThreeWiresMatchesFigureLayout) {
  const auto net = make_optimal_small(3);
  EXPECT_EQ(net.depth(), 3u);
  const std::vector<ComparatorLayer> expected{{{0, 1}}, {{1, 2}}, {{0, 1}}};
  EXPECT_EQ(net.layers(), expected);
}

TEST(OptimalSmall, TwoWiresIsOneComparator) {
  const auto net = make_optimal_small(2);
  EXPECT_EQ(net.depth(), 1u);
  EXPECT_EQ(net.comparator_count(), 1u);
}

TEST(OptimalSmall, FourWiresSortsFigureInput) {
  const auto net = make_optimal_small(4);
  const std::vector<double> in{0.3, 0.1, 0.6, 0.2};
  EXPECT_EQ(net.apply(in), (std::vector<double>{0.1, 0.2, 0.3, 0.6}));
  EXPECT_EQ(net.depth(), 3u);
}

TEST(OptimalSmall, MirroredFourWiresGivesDescendingTrace) {
  const auto net = make_optimal_small(4);
  std::vector<double> in{0.3, 0.1, 0.6, 0.2};
  std::reverse(in.begin(), in.end());
  auto out = net.apply(in);
  std::reverse(out.begin(), out.end());
  EXPECT_EQ(out, (std::vector<double>{0.6, 0.3, 0.2, 0.1}));
}

TEST(OptimalSmall, AllSizesSortExhaustively) {
  for (std::size_t x = 2; x <= 4; ++x) EXPECT_TRUE(sorts_all_binary(make_optimal_small(x))) << x;
}

TEST(OptimalSmall, RejectsUnsupportedSizes) {
  EXPECT_ERROR_KIND(make_optimal_small(1), ErrorKind::unsupported_size);
  EXPECT_ERROR_KIND(make_optimal_small(5), ErrorKind::unsupported_size);
}

TEST(MergeNetwork, TwoWires) {
  const auto net = make_merge_network(2);
  EXPECT_EQ(net.depth(), 1u);
  EXPECT_EQ(net.comparator_count(), 1u);
}

TEST(MergeNetwork, FourWiresPassesExhaustiveCheck) {
  const auto rep = verify_zero_one(make_merge_network(4));
  EXPECT_TRUE(rep.passed);
  EXPECT_FALSE(rep.probabilistic);
  EXPECT_EQ(rep.vectors_tested, 16u);
}

TEST(MergeNetwork, EightWiresRespectsDepthBound) {
  EXPECT_GE(make_merge_network(8).depth(), 3u);
}

TEST(MergeNetwork, SortsEverySizeUpToSixteenExhaustively) {
  for (std::size_t x = 2; x <= 16; ++x) {
    const auto net = make_merge_network(x);
    EXPECT_TRUE(sorts_all_binary(net)) << "x=" << x;
    EXPECT_GE(net.depth(), depth_bounds(x).chosen_depth);
  }
}

TEST(MergeNetwork, DepthIsPolylogarithmic) {
  for (std::size_t x : {16u, 32u, 100u, 784u}) {
    const double lg = std::ceil(std::log2(static_cast<double>(x)));
    EXPECT_LE(static_cast<double>(make_merge_network(x).depth()), lg * (lg + 1) / 2) << x;
  }
}

TEST(MergeNetwork, RejectsFewerThanTwoWires) {
  EXPECT_ERROR_KIND(make_merge_network(1), ErrorKind::unsupported_size);
}

TEST(BrickNetwork, SixWiresHasThreeThenTwoComparators) {
  const auto net = make_brick_network(6);
  ASSERT_EQ(net.depth(), 2u);
  EXPECT_EQ(net.layers()[0].size(), 3u);
  EXPECT_EQ(net.layers()[1].size(), 2u);
  EXPECT_EQ(net.layers()[0][0], (Comparator{0, 1}));
  EXPECT_EQ(net.layers()[1][0], (Comparator{1, 2}));
}

TEST(BrickNetwork, TwoWiresHasEmptySecondLayer) {
  const auto net = make_brick_network(2);
  ASSERT_EQ(net.depth(), 2u);
  EXPECT_EQ(net.layers()[0].size(), 1u);
  EXPECT_TRUE(net.layers()[1].empty());
}

TEST(BrickNetwork, ReversedFiveNeedsRepeats) {
  const std::vector<double> in{1.0, 0.8, 0.6, 0.4, 0.2};
  const auto brick = make_brick_network(5);
  EXPECT_FALSE(is_sorted_ascending(brick.apply(in)));
  EXPECT_EQ(repeat_network(brick, 5).apply(in), sorted_copy(in));
}

TEST(BrickNetwork, SingleApplicationOnFourWiresFailsVerification) {
  const auto rep = verify_zero_one(make_brick_network(4));
  EXPECT_FALSE(rep.passed);
  ASSERT_TRUE(rep.counterexample.has_value());
  std::vector<double> v(rep.counterexample->begin(), rep.counterexample->end());
  EXPECT_FALSE(is_sorted_ascending(make_brick_network(4).apply(v)));
}

TEST(BrickNetwork, WireCountApplicationsSortExhaustively) {
  for (std::size_t x = 2; x <= 10; ++x) {
    EXPECT_TRUE(sorts_all_binary(repeat_network(make_brick_network(x), x))) << x;
  }
}

// Each application is two odd-even transposition rounds and x rounds always
// suffice, so ceil(x/2) applications are the exact minimum.
TEST(BrickNetwork, HalfTheWireCountApplicationsIsTheMinimum) {
  for (std::size_t x = 3; x <= 10; ++x) {
    const std::size_t need = (x + 1) / 2;
    const auto brick = make_brick_network(x);
    EXPECT_TRUE(sorts_all_binary(repeat_network(brick, need))) << x;
    if (need > 1) EXPECT_FALSE(sorts_all_binary(repeat_network(brick, need - 1))) << x;
    EXPECT_TRUE(sorts_all_binary(repeat_network(brick, x - 1))) << x;
  }
  EXPECT_FALSE(sorts_all_binary(make_brick_network(3)));
}

TEST(RepeatNetwork, ConcatenatesLayers) {
  const auto brick = make_brick_network(5);
  const auto r = repeat_network(brick, 3);
  EXPECT_EQ(r.depth(), 6u);
  EXPECT_EQ(r.layers()[2], brick.layers()[0]);
  EXPECT_ERROR_KIND(repeat_network(brick, 0), ErrorKind::invalid_argument);
}

TEST(Apply, AlreadySortedUnchanged) {
  const std::vector<double> in{0.1, 0.2, 0.2, 0.5, 0.9, 1.0};
  EXPECT_EQ(make_merge_network(6).apply(in), in);
}

TEST(Apply, RandomTenVectorMatchesComparisonSort) {
  std::mt19937_64 gen(42);
  const auto net = make_merge_network(10);
  for (int t = 0; t < 200; ++t) {
    const auto v = testsupport::uniform_vector(gen, 10);
    EXPECT_EQ(net.apply(v), sorted_copy(v));
  }
}

TEST(Apply, LengthMismatch) {
  const auto net = make_merge_network(4);
  const std::vector<double> three{1, 2, 3};
  EXPECT_ERROR_KIND((void)net.apply(three), ErrorKind::length_mismatch);
  EXPECT_ERROR_KIND((void)net.trace(three), ErrorKind::length_mismatch);
}

TEST(Apply, TraceStartsAtInputAndEndsAtOutput) {
  const auto net = make_optimal_small(4);
  const std::vector<double> in{0.3, 0.1, 0.6, 0.2};
  const auto t = net.trace(in);
  ASSERT_EQ(t.size(), net.depth() + 1);
  EXPECT_EQ(t.front(), in);
  EXPECT_EQ(t.back(), net.apply(in));
}

TEST(Apply, BitsAgreeWithRealValuedApply) {
  const auto net = make_merge_network(9);
  for (std::uint64_t b = 0; b < 512; ++b) {
    const auto out = net.apply(binary_vector(b, 9));
    EXPECT_EQ(binary_vector(net.apply_bits(b), 9), out) << b;
  }
}

TEST(Validation, RejectsBadComparators) {
  EXPECT_ERROR_KIND(SortingNetwork(3, {{{1, 1}}}), ErrorKind::invalid_network);
  EXPECT_ERROR_KIND(SortingNetwork(3, {{{2, 1}}}), ErrorKind::invalid_network);
  EXPECT_ERROR_KIND(SortingNetwork(3, {{{0, 3}}}), ErrorKind::invalid_network);
  EXPECT_ERROR_KIND(SortingNetwork(4, {{{0, 1}, {1, 2}}}), ErrorKind::invalid_network);
  EXPECT_ERROR_KIND(SortingNetwork(3, {}), ErrorKind::invalid_network);
  EXPECT_ERROR_KIND(SortingNetwork(0, {{}}), ErrorKind::invalid_network);
}

TEST(Verify, OptimalThreeChecksEightVectors) {
  const auto rep = verify_zero_one(make_optimal_small(3));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.vectors_tested, 8u);
}

TEST(Verify, MergeSixChecksSixtyFourVectors) {
  const auto rep = verify_zero_one(make_merge_network(6));
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.vectors_tested, 64u);
}

TEST(Verify, ExhaustiveAboveCapThrows) {
  EXPECT_ERROR_KIND(verify_zero_one(make_merge_network(23)), ErrorKind::too_many_wires);
  EXPECT_ERROR_KIND(verify_zero_one(make_merge_network(8), 7), ErrorKind::too_many_wires);
}

TEST(Verify, AboveCapFallsBackToRandomVectors) {
  const auto rep = verify_network(make_merge_network(30), VerifyOptions{22, 20'000, 3});
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.probabilistic);
  EXPECT_EQ(rep.vectors_tested, 20'000u);

  const auto bad = verify_network(make_brick_network(30), VerifyOptions{22, 20'000, 3});
  EXPECT_FALSE(bad.passed);
  EXPECT_TRUE(bad.counterexample.has_value());
}

TEST(Verify, AgreesWithBruteForceOnRandomNetworks) {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t x = 2 + gen() % 6;
    const auto net = random_network(gen, x, 1 + gen() % 8);
    EXPECT_EQ(verify_zero_one(net).passed, sorts_all_binary(net));
  }
}

TEST(Properties, PermutationInvariance) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t x = 2 + gen() % 12;
    const auto net = random_network(gen, x, 1 + gen() % 10);
    auto v = testsupport::uniform_vector(gen, x, -5.0, 5.0);
    if (gen() % 2) v[gen() % x] = v[0];
    EXPECT_EQ(sorted_copy(net.apply(v)), sorted_copy(v));
  }
}

TEST(Properties, ZeroOneSoundness) {
  std::mt19937_64 gen(13);
  int passing = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t x = 2 + gen() % 5;
    const auto net = random_network(gen, x, 2 + gen() % 10);
    const auto rep = verify_zero_one(net);
    if (rep.passed) {
      ++passing;
      for (int k = 0; k < 10'000 / 30; ++k) {
        const auto v = testsupport::uniform_vector(gen, x);
        ASSERT_EQ(net.apply(v), sorted_copy(v));
      }
    } else {
      ASSERT_TRUE(rep.counterexample.has_value());
      std::vector<double> v(rep.counterexample->begin(), rep.counterexample->end());
      EXPECT_FALSE(is_sorted_ascending(net.apply(v)));
    }
  }
  EXPECT_GT(passing, 0);
}

TEST(Properties, SortingNetworksSortTenThousandRealVectors) {
  std::mt19937_64 gen(17);
  for (const auto& net : {make_merge_network(12), make_optimal_small(4),
                          repeat_network(make_brick_network(7), 7)}) {
    ASSERT_TRUE(verify_zero_one(net).passed);
    for (int k = 0; k < 10'000; ++k) {
      const auto v = testsupport::uniform_vector(gen, net.wires());
      ASSERT_EQ(net.apply(v), sorted_copy(v));
    }
  }
}

TEST(DepthBounds, ImageScaleConfigurations) {
  EXPECT_EQ(depth_bounds(784).chosen_depth, 10u);
  EXPECT_EQ(depth_bounds(46'656).chosen_depth, 16u);
  const auto two = depth_bounds(2);
  EXPECT_EQ(two.chosen_depth, 1u);
  EXPECT_DOUBLE_EQ(two.info_theoretic, 1.0);
}

TEST(DepthBounds, ChosenIsCeilOfInfoTheoretic) {
  for (std::size_t x = 2; x < 5000; x += 7) {
    const auto b = depth_bounds(x);
    EXPECT_GE(static_cast<double>(b.chosen_depth), b.info_theoretic);
    EXPECT_LT(static_cast<double>(b.chosen_depth) - 1.0, b.info_theoretic);
    EXPECT_NEAR(b.kahale, 3.27 * std::log2(static_cast<double>(x)), 1e-12);
  }
}

TEST(Json, RoundTrip) {
  const auto net = make_merge_network(7);
  const nlohmann::json j = net;
  EXPECT_EQ(j["wires"], 7);
  EXPECT_EQ(network_from_json(j), net);
  EXPECT_EQ(network_from_json(nlohmann::json::parse(j.dump())), net);
}

TEST(Json, Malformed) {
  EXPECT_ERROR_KIND(network_from_json(nlohmann::json::parse(R"({"wires":3})")), ErrorKind::parse_error);
  EXPECT_ERROR_KIND(network_from_json(nlohmann::json::parse(R"({"wires":3,"layers":[[[0]]]})")),
                    ErrorKind::parse_error);
  EXPECT_ERROR_KIND(network_from_json(nlohmann::json::parse(R"({"wires":3,"layers":[[[1,0]]]})")),
                    ErrorKind::invalid_network);
}
