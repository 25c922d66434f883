#include "sortnetc/nnruntime.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sortnetc/error.hpp"

namespace sortnetc {

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
    case Activation::sigmoid: return "sigmoid";
  }
  return "relu";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  if (name == "sigmoid") return Activation::sigmoid;
  throw Error(ErrorKind::parse_error, "unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double z) noexcept {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::identity: return z;
    case Activation::sigmoid:
      if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
      {
        const double e = std::exp(z);
        return e / (1.0 + e);
      }
  }
  return z;
}

DenseNetwork::DenseNetwork(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    if (l.biases.size() != l.out()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "layer " + std::to_string(i) + ": " + std::to_string(l.out()) + " rows but " +
                      std::to_string(l.biases.size()) + " biases");
    }
    if (i > 0 && layers_[i - 1].out() != l.in()) {
      throw Error(ErrorKind::dimension_mismatch,
                  "layer " + std::to_string(i) + " expects " + std::to_string(l.in()) +
                      " inputs, previous layer emits " + std::to_string(layers_[i - 1].out()));
    }
    for (double w : l.weights.data()) {
      if (!std::isfinite(w)) throw Error(ErrorKind::invalid_argument, "non-finite weight");
    }
    for (double b : l.biases) {
      if (!std::isfinite(b)) throw Error(ErrorKind::invalid_argument, "non-finite bias");
    }
  }
}

std::size_t DenseNetwork::input_size() const noexcept {
  return layers_.empty() ? 0 : layers_.front().in();
}

std::size_t DenseNetwork::output_size() const noexcept {
  return layers_.empty() ? 0 : layers_.back().out();
}

std::vector<double> DenseNetwork::forward(std::span<const double> input) const {
  if (layers_.empty()) return {input.begin(), input.end()};
  if (input.size() != input_size()) {
    throw Error(ErrorKind::dimension_mismatch, "expected " + std::to_string(input_size()) +
                                                   " inputs, got " + std::to_string(input.size()));
  }
  std::vector<double> current(input.begin(), input.end());
  std::vector<double> next;
  for (const DenseLayer& l : layers_) {
    next.assign(l.out(), 0.0);
    for (std::size_t r = 0; r < l.out(); ++r) {
      double z = l.biases[r];
      const auto w = l.weights.row(r);
      for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * current[c];
      next[r] = activate(l.activation, z);
    }
    current.swap(next);
  }
  return current;
}

std::size_t DenseNetwork::parameter_count(ParameterCounting counting) const noexcept {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) {
    n += l.weights.size();
    if (counting == ParameterCounting::weights_and_biases) n += l.biases.size();
  }
  return n;
}

void to_json(nlohmann::json& j, const DenseNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const DenseLayer& l : net.layers()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < l.out(); ++r) {
      const auto row = l.weights.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    layers.push_back({{"activation", to_string(l.activation)},
                      {"weights", std::move(rows)},
                      {"biases", l.biases}});
  }
  j = nlohmann::json{{"layers", std::move(layers)}};
}

DenseNetwork model_from_json(const nlohmann::json& j) {
  try {
    std::vector<DenseLayer> layers;
    for (const auto& jl : j.at("layers")) {
      const auto& rows = jl.at("weights");
      const std::size_t out = rows.size();
      const std::size_t in = out == 0 ? 0 : rows.at(0).size();
      DenseLayer l;
      l.weights = Matrix(out, in);
      for (std::size_t r = 0; r < out; ++r) {
        if (rows[r].size() != in) throw Error(ErrorKind::parse_error, "ragged weight matrix");
        for (std::size_t c = 0; c < in; ++c) l.weights(r, c) = rows[r][c].get<double>();
      }
      l.biases = jl.at("biases").get<std::vector<double>>();
      l.activation = activation_from_string(jl.at("activation").get<std::string>());
      layers.push_back(std::move(l));
    }
    return DenseNetwork(std::move(layers));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("model json: ") + e.what());
  }
}

}  // namespace sortnetc
