#include <cmath>
#include <limits>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sortnetc/nncompiler.hpp"
#include "sortnetc/nnruntime.hpp"
#include "test_support.hpp"

using namespace sortnetc;

namespace {

DenseLayer layer(std::size_t out, std::size_t in, std::vector<double> w, std::vector<double> b,
                 Activation a) {
  DenseLayer l{Matrix(out, in), std::move(b), a};
  std::copy(w.begin(), w.end(), l.weights.data().begin());
  return l;
}

}  // namespace

TEST(DenseNetwork, IdentityLayer) {
  const DenseNetwork net({layer(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}, Activation::identity)});
  const std::vector<double> in{-0.5, 0.25, 7.0};
  EXPECT_EQ(net.forward(in), in);
}

TEST(DenseNetwork, SingleReluNeuron) {
  const DenseNetwork net({layer(1, 2, {1, -1}, {0}, Activation::relu)});
  EXPECT_EQ(net.forward(std::vector<double>{0.2, 0.7}), std::vector<double>{0.0});
  EXPECT_NEAR(net.forward(std::vector<double>{0.7, 0.2})[0], 0.5, 1e-15);
}

TEST(DenseNetwork, CompiledComparatorOnFigurePair) {
  const auto net = compile_single_comparator();
  EXPECT_EQ(net.forward(std::vector<double>{0.2, 0.7}), (std::vector<double>{0.2, 0.7}));
  EXPECT_EQ(net.forward(std::vector<double>{0.7, 0.2}), (std::vector<double>{0.2, 0.7}));
}

TEST(DenseNetwork, SigmoidAndBias) {
  const DenseNetwork net({layer(1, 1, {2.0}, {-1.0}, Activation::sigmoid)});
  EXPECT_NEAR(net.forward(std::vector<double>{0.5})[0], 0.5, 1e-15);
  EXPECT_NEAR(net.forward(std::vector<double>{1.0})[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(DenseNetwork, ParameterCountingModes) {
  const DenseNetwork net({layer(4, 3, std::vector<double>(12, 0.1), std::vector<double>(4), Activation::relu),
                          layer(2, 4, std::vector<double>(8, 0.1), std::vector<double>(2), Activation::identity)});
  EXPECT_EQ(net.parameter_count(ParameterCounting::weights_only), 20u);
  EXPECT_EQ(net.parameter_count(ParameterCounting::weights_and_biases), 26u);
  EXPECT_EQ(DenseNetwork().parameter_count(ParameterCounting::weights_only), 0u);
  EXPECT_EQ(DenseNetwork().parameter_count(ParameterCounting::weights_and_biases), 0u);
}

TEST(DenseNetwork, ShapeValidation) {
  EXPECT_ERROR_KIND(DenseNetwork({layer(2, 2, {1, 0, 0, 1}, {0}, Activation::relu)}),
                    ErrorKind::dimension_mismatch);
  EXPECT_ERROR_KIND(DenseNetwork({layer(2, 2, {1, 0, 0, 1}, {0, 0}, Activation::relu),
                                  layer(1, 3, {1, 1, 1}, {0}, Activation::relu)}),
                    ErrorKind::dimension_mismatch);
  EXPECT_ERROR_KIND(
      DenseNetwork({layer(1, 1, {std::numeric_limits<double>::quiet_NaN()}, {0}, Activation::relu)}),
      ErrorKind::invalid_argument);
  EXPECT_ERROR_KIND(
      DenseNetwork({layer(1, 1, {1}, {std::numeric_limits<double>::infinity()}, Activation::relu)}),
      ErrorKind::invalid_argument);
}

TEST(DenseNetwork, ForwardDimensionMismatch) {
  const auto net = compile_single_comparator();
  EXPECT_ERROR_KIND((void)net.forward(std::vector<double>{1, 2, 3}), ErrorKind::dimension_mismatch);
}

TEST(DenseNetwork, JsonRoundTrip) {
  const auto net = compile(make_merge_network(5), false);
  const nlohmann::json j = net;
  EXPECT_EQ(model_from_json(nlohmann::json::parse(j.dump())), net);
  EXPECT_ERROR_KIND(model_from_json(nlohmann::json::parse(R"({"layers":[{"activation":"tanh","weights":[[1]],"biases":[0]}]})")),
                    ErrorKind::parse_error);
  EXPECT_ERROR_KIND(model_from_json(nlohmann::json::parse(R"({"layers":[{"activation":"relu","weights":[[1],[1,2]],"biases":[0,0]}]})")),
                    ErrorKind::parse_error);
}

TEST(Activation, StringConversion) {
  for (auto a : {Activation::relu, Activation::identity, Activation::sigmoid}) {
    EXPECT_EQ(activation_from_string(to_string(a)), a);
  }
  EXPECT_ERROR_KIND(activation_from_string("softmax"), ErrorKind::parse_error);
  EXPECT_EQ(activate(Activation::relu, -3.0), 0.0);
  EXPECT_EQ(activate(Activation::identity, -3.0), -3.0);
}
