#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sortnetc/datagen.hpp"
#include "sortnetc/nnruntime.hpp"

namespace sortnetc {

enum class Task { classify_list, sort_vector };
enum class Loss { bce, mse };

std::string_view to_string(Task t) noexcept;
std::string_view to_string(Loss l) noexcept;

/// Optimizer recorded in every report. Adam stands in for Ranger
/// (RAdam + Lookahead).
inline constexpr std::string_view kOptimizerName = "adam";

struct TrainConfig {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output
  Task task = Task::classify_list;
  Loss loss = Loss::bce;
  std::size_t epochs = 1500;
  std::size_t batch_size = 64;
  double learning_rate = 2e-2;
  /// Final learning rate as a fraction of learning_rate (cosine schedule).
  double final_lr_fraction = 0.01;
  std::uint64_t seed = 0;

  /// classify_list needs bce, sort_vector needs mse.
  void validate() const;
  [[nodiscard]] Activation output_activation() const noexcept {
    return task == Task::classify_list ? Activation::sigmoid : Activation::identity;
  }
};

struct Sample {
  std::vector<double> input;
  std::vector<double> target;
};

struct TrainReport {
  double final_train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t parameter_count = 0;  // weights and biases
  std::size_t epochs_run = 0;
  std::size_t restart_index = 0;
  bool diverged = false;
  bool success = false;  // learn_to_sort only
  std::size_t restarts_run = 0;
  std::string optimizer{kOptimizerName};

  friend bool operator==(const TrainReport&, const TrainReport&) = default;
};

void to_json(nlohmann::json& j, const TrainReport& r);

/// He initialization: weights ~ N(0, 2 / fan_in), zero biases. Hidden layers
/// use ReLU, the last layer `output`.
DenseNetwork init_he(std::span<const std::size_t> layer_sizes, std::uint64_t seed,
                     Activation output = Activation::identity);

/// Per-sample loss. BCE is computed from the final pre-activation
/// (softplus(z) - y z) and requires a sigmoid output layer; MSE averages
/// over output components.
double sample_loss(const DenseNetwork& net, Loss loss, const Sample& sample);

/// Gradient buffers shaped like the network.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  explicit Gradients(const DenseNetwork& net);
  void zero();
};

/// Adds the per-sample gradient into `grad` and returns the sample loss.
double accumulate_gradient(const DenseNetwork& net, Loss loss, const Sample& sample,
                           Gradients& grad);

struct TrainResult {
  DenseNetwork network;
  TrainReport report;
};

/// Minibatch Adam with a cosine learning-rate schedule on fixed data.
/// Deterministic for a given config.
TrainResult train(const TrainConfig& config, std::span<const Sample> train_data,
                  std::span<const Sample> test_data);

/// Fraction of samples whose thresholded output matches the target
/// (classification) or whose output is sorted to within 1e-2 (sorting).
double accuracy(const DenseNetwork& net, Task task, std::span<const Sample> data);

/// Turns list samples into classifier inputs, sorted or as generated.
std::vector<Sample> list_samples(std::span<const NumberListSample> lists, bool sorted);

struct SortTrainingOptions {
  std::size_t steps = 12'000;
  std::size_t batch_size = 32;
  double learning_rate = 1e-2;
  double final_lr_fraction = 1e-3;
  double success_threshold = 1e-4;
  std::size_t eval_samples = 2048;
  std::uint64_t seed = 0;
};

/// One restart of the sort-learning experiment: fresh random vectors in
/// [0,1]^x every step, sorted copies as targets, MSE loss.
TrainResult train_sorter(std::span<const std::size_t> layer_sizes, std::size_t restart,
                         const SortTrainingOptions& options);

/// Up to `restarts` independent initializations; stops at the first success
/// (lowest restart index) and otherwise reports the lowest-loss restart.
TrainResult learn_to_sort(std::size_t wires, std::span<const std::size_t> layer_sizes,
                          std::size_t restarts, const SortTrainingOptions& options = {});

/// Max over parameters of |analytic - numeric| / max(|analytic| + |numeric|, 1e-6)
/// with central differences of step `step`.
double gradient_check(const DenseNetwork& net, Loss loss, const Sample& sample,
                      double step = 1e-5);

/// Smallest |pre-activation| over all ReLU units for this input.
double kink_distance(const DenseNetwork& net, std::span<const double> input);

/// Jitters the input until every ReLU pre-activation is at least `margin`
/// away from zero (or gives up after `tries`), so finite differences never
/// straddle a kink.
Sample perturb_off_kinks(const DenseNetwork& net, Sample sample, std::uint64_t seed,
                         double margin = 1e-3, std::size_t tries = 1000);

}  // namespace sortnetc
