#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sortnetc {

enum class Activation { relu, identity, sigmoid };

std::string_view to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view name);

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out = activation(weights * in + biases), weights is out x in.
struct DenseLayer {
  Matrix weights;
  std::vector<double> biases;
  Activation activation = Activation::relu;

  [[nodiscard]] std::size_t in() const noexcept { return weights.cols(); }
  [[nodiscard]] std::size_t out() const noexcept { return weights.rows(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

double activate(Activation a, double z) noexcept;

enum class ParameterCounting { weights_only, weights_and_biases };

class DenseNetwork {
 public:
  DenseNetwork() = default;
  /// Validates shapes (bias length, dimension chaining) and finiteness.
  explicit DenseNetwork(std::vector<DenseLayer> layers);

  [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  /// Weight access for trainers. Shapes must not be changed through it.
  [[nodiscard]] std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }

  [[nodiscard]] bool empty() const noexcept { return layers_.empty(); }
  [[nodiscard]] std::size_t input_size() const noexcept;
  [[nodiscard]] std::size_t output_size() const noexcept;

  [[nodiscard]] std::vector<double> forward(std::span<const double> input) const;

  [[nodiscard]] std::size_t parameter_count(ParameterCounting counting) const noexcept;

  friend bool operator==(const DenseNetwork&, const DenseNetwork&) = default;

 private:
  std::vector<DenseLayer> layers_;
};

void to_json(nlohmann::json& j, const DenseNetwork& net);
DenseNetwork model_from_json(const nlohmann::json& j);

}  // namespace sortnetc
