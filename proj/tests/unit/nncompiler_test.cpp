#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sortnetc/nncompiler.hpp"
#include "test_support.hpp"

using namespace sortnetc;
using testsupport::binary_vector;

namespace {

std::vector<SortingNetwork> all_kinds(std::size_t x) {
  std::vector<SortingNetwork> nets{make_merge_network(x), make_brick_network(x),
                                   repeat_network(make_brick_network(x), x)};
  if (x <= 4) nets.push_back(make_optimal_small(x));
  return nets;
}

// Weight count by the closed form, in 128-bit arithmetic.
unsigned __int128 formula(unsigned __int128 x, unsigned __int128 d) {
  return 2 * d * ((3 * x + 1) / 2) * x;
}

}  // namespace

TEST(HiddenWidth, CeilOfOneAndAHalf) {
  EXPECT_EQ(hidden_width(2), 3u);
  EXPECT_EQ(hidden_width(3), 5u);
  EXPECT_EQ(hidden_width(784), 1176u);
  for (std::uint64_t x = 1; x < 200; ++x) EXPECT_EQ(hidden_width(x), (3 * x + 1) / 2);
}

TEST(Compile, ThreeSorterParameterCounts) {
  const auto net = make_optimal_small(3);
  const auto unpruned = compile(net, false);
  const auto pruned = compile(net, true);
  EXPECT_EQ(unpruned.parameter_count(ParameterCounting::weights_only), 90u);
  EXPECT_EQ(pruned.parameter_count(ParameterCounting::weights_only), 72u);
  EXPECT_EQ(pruned.layers().size(), 6u);
  EXPECT_EQ(feedforward_parameters(3, 3), 90u);
}

TEST(Compile, SingleComparatorHasTwelveWeights) {
  const auto net = compile_single_comparator();
  EXPECT_EQ(net.parameter_count(ParameterCounting::weights_only), 12u);
  EXPECT_EQ(net.layers().size(), 2u);
  EXPECT_EQ(net.layers()[0].out(), 3u);
}

TEST(Compile, GadgetExamples) {
  const auto net = compile_single_comparator();
  EXPECT_EQ(net.forward(std::vector<double>{0.5, 0.5}), (std::vector<double>{0.5, 0.5}));
  for (double a : {0.0, 1.0}) {
    for (double b : {0.0, 1.0}) {
      EXPECT_EQ(net.forward(std::vector<double>{a, b}), (std::vector<double>{std::min(a, b), std::max(a, b)}));
    }
  }
}

TEST(Compile, GadgetFailsOnNegativeInputs) {
  const auto out = compile_single_comparator().forward(std::vector<double>{-1.0, -2.0});
  EXPECT_NE(out, (std::vector<double>{-2.0, -1.0}));
}

TEST(Compile, EmptyLayerIsIdentity) {
  const SortingNetwork idle(2, {{}});
  const auto model = compile(idle, false);
  EXPECT_EQ(model.parameter_count(ParameterCounting::weights_only), formula(2, 1));
  std::mt19937_64 gen(1);
  for (int t = 0; t < 100; ++t) {
    const auto v = testsupport::uniform_vector(gen, 2);
    EXPECT_EQ(model.forward(v), v);
  }
}

TEST(Compile, AllBiasesZeroAndReluEverywhere) {
  for (bool prune : {false, true}) {
    const auto model = compile(make_merge_network(7), prune);
    for (const auto& layer : model.layers()) {
      EXPECT_EQ(layer.activation, Activation::relu);
      for (double b : layer.biases) EXPECT_EQ(b, 0.0);
    }
  }
}

TEST(Compile, MatchesNetworkBitExactlyOnBinaryInputs) {
  for (std::size_t x = 2; x <= 8; ++x) {
    for (const auto& net : all_kinds(x)) {
      for (bool prune : {false, true}) {
        const auto model = compile(net, prune);
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << x); ++b) {
          const auto v = binary_vector(b, x);
          ASSERT_EQ(model.forward(v), net.apply(v)) << "x=" << x << " b=" << b;
        }
      }
    }
  }
}

// Absolute error measured in ulps of the largest input. Each gadget output
// is one rounding away from the exact min/max on that scale.
TEST(Compile, WithinFourUlpOfLargestInputOnRealInputs) {
  std::mt19937_64 gen(5);
  for (std::size_t x = 2; x <= 8; ++x) {
    for (const auto& net : all_kinds(x)) {
      const auto model = compile(net, false);
      for (int t = 0; t < 1000; ++t) {
        const auto v = testsupport::uniform_vector(gen, x);
        const auto got = model.forward(v);
        const auto want = net.apply(v);
        const double top = *std::max_element(v.begin(), v.end());
        const double unit = std::nextafter(top, 2.0) - top;
        for (std::size_t i = 0; i < x; ++i) ASSERT_LE(std::abs(got[i] - want[i]), 4 * unit);
      }
    }
  }
}

// The min output is x_hi - (x_hi - x_lo); for x_lo far below x_hi the
// rounding of the difference is large relative to x_lo itself.
TEST(Compile, SmallMinimumLosesRelativePrecision) {
  const auto gadget = compile_single_comparator();
  std::uint64_t worst = 0;
  for (double hi : {0.9, 0.7, 0.3}) {
    const auto out = gadget.forward(std::vector<double>{1e-6, hi});
    worst = std::max(worst, testsupport::ulp_distance(out[0], 1e-6));
    EXPECT_NEAR(out[1], hi, 1e-16);
  }
  EXPECT_GT(worst, 4u);
}

TEST(Compile, PruningPreservesOutputsAndNeverGrows) {
  std::mt19937_64 gen(9);
  for (std::size_t x = 2; x <= 12; ++x) {
    for (const auto& net : all_kinds(x)) {
      const auto full = compile(net, false);
      const auto pruned = compile(net, true);
      EXPECT_LE(pruned.parameter_count(ParameterCounting::weights_only),
                full.parameter_count(ParameterCounting::weights_only));
      for (int t = 0; t < 50; ++t) {
        const auto v = testsupport::uniform_vector(gen, x);
        EXPECT_EQ(pruned.forward(v), full.forward(v));
      }
    }
  }
}

TEST(Compile, UnprunedWeightCountMatchesFormula) {
  for (std::size_t x = 2; x <= 40; ++x) {
    for (const auto& net : all_kinds(x)) {
      const auto p = compile(net, false).parameter_count(ParameterCounting::weights_only);
      EXPECT_EQ(p, formula(x, net.depth())) << x;
      EXPECT_EQ(p, feedforward_parameters(x, net.depth()));
    }
  }
}

TEST(Compile, PositivelyHomogeneous) {
  std::mt19937_64 gen(21);
  const auto net = make_merge_network(8);
  const auto model = compile(net, false);
  for (int t = 0; t < 200; ++t) {
    const auto v = testsupport::uniform_vector(gen, 8);
    const auto base = model.forward(v);
    for (double s : {0.25, 2.0, 1024.0}) {
      std::vector<double> sv(v);
      for (double& e : sv) e *= s;
      const auto scaled = model.forward(sv);
      for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(scaled[i], s * base[i]);
    }
    std::vector<double> sv(v);
    for (double& e : sv) e *= 3.7;
    const auto scaled = model.forward(sv);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(scaled[i], 3.7 * base[i], 1e-14);
  }
}

TEST(Compile, OutputIsNearPermutationOfInput) {
  std::mt19937_64 gen(23);
  const auto model = compile(make_merge_network(16), true);
  for (int t = 0; t < 500; ++t) {
    const auto v = testsupport::uniform_vector(gen, 16);
    const auto out = model.forward(v);
    const auto want = testsupport::sorted_copy(v);
    const double top = want.back();
    const double unit = std::nextafter(top, 2.0) - top;
    for (std::size_t i = 0; i < 16; ++i) ASSERT_LE(std::abs(out[i] - want[i]), 4 * unit);
  }
}

TEST(Formulas, FeedForwardAndIterative) {
  EXPECT_EQ(feedforward_parameters(784, 10), 18'439'680u);
  EXPECT_EQ(feedforward_parameters(46'656, 16), 104'485'552'128u);
  EXPECT_EQ(feedforward_parameters(36'864, 16), 65'229'815'808u);
  EXPECT_EQ(iterative_parameters(784), 3'687'936u);
  EXPECT_EQ(iterative_parameters(784), 4u * 1176u * 784u);
  EXPECT_EQ(iterative_parameters(46'656), static_cast<std::uint64_t>(formula(46'656, 2)));
}

TEST(Formulas, OverflowIsReported) {
  EXPECT_ERROR_KIND(feedforward_parameters(std::uint64_t{1} << 31, 1u << 20), ErrorKind::too_large);
}

TEST(Estimate, AttentionHeadline) {
  const auto s = estimate_parameters(224, 8, true, 10);
  EXPECT_EQ(s.numbers, 784u);
  EXPECT_EQ(s.depth, 10u);
  EXPECT_EQ(s.p_feedforward, 18'439'680u);
  EXPECT_EQ(s.p_iterative, 3'687'936u);
  EXPECT_EQ(s.p_iterative_depth4, 7'375'872u);
  bool iter_note = false;
  for (const auto& w : s.warnings) iter_note |= w.find("7.3 million") != std::string::npos;
  EXPECT_TRUE(iter_note);
}

TEST(Estimate, AttentionDefaultDepthIsInfoTheoretic) {
  const auto s = estimate_parameters(224, 8, true, std::nullopt);
  EXPECT_EQ(s.depth, 10u);
  EXPECT_FALSE(s.explicit_depth);
}

TEST(Estimate, NoAttentionReportsBothReadings) {
  const auto s = estimate_parameters(224, 8, false, 16);
  EXPECT_EQ(s.numbers, 46'656u);
  EXPECT_EQ(s.p_feedforward, 104'485'552'128u);
  bool big = false;
  for (const auto& w : s.warnings) big |= w.find("65.3 billion") != std::string::npos &&
                                          w.find("36,864") != std::string::npos;
  EXPECT_TRUE(big);
  EXPECT_EQ(s.p_iterative_depth4, 2 * s.p_iterative);
}

TEST(Estimate, PositionRules) {
  EXPECT_EQ(estimate_parameters(224, 8, false, 16, PositionRule::sliding_window).numbers, 47'089u);
  EXPECT_EQ(estimate_parameters(224, 8, false, 16, PositionRule::stated_formula).numbers, 223u * 223u);
  EXPECT_EQ(estimate_parameters(32, 4, true, std::nullopt).numbers, 64u);
  EXPECT_ERROR_KIND(estimate_parameters(4, 8, true, std::nullopt), ErrorKind::invalid_argument);
}

TEST(Estimate, InvariantsHold) {
  for (std::uint64_t n : {2u, 4u, 8u, 16u}) {
    for (bool att : {false, true}) {
      const auto s = estimate_parameters(128, n, att, std::nullopt);
      EXPECT_EQ(s.p_feedforward, static_cast<std::uint64_t>(formula(s.numbers, s.depth)));
      EXPECT_EQ(s.p_iterative, 4 * hidden_width(s.numbers) * s.numbers);
      EXPECT_EQ(s.depth, depth_bounds(s.numbers).chosen_depth);
    }
  }
}
