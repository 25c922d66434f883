#include "sortnetc/microtrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <nlohmann/json.hpp>

#include "sortnetc/error.hpp"
#include "sortnetc/parallel.hpp"
#include "sortnetc/rng.hpp"

namespace sortnetc {

std::string_view to_string(Task t) noexcept {
  return t == Task::classify_list ? "classify_list" : "sort_vector";
}

std::string_view to_string(Loss l) noexcept { return l == Loss::bce ? "bce" : "mse"; }

void TrainConfig::validate() const {
  if (layer_sizes.size() < 2) throw Error(ErrorKind::invalid_argument, "need >= 2 layer sizes");
  if (std::find(layer_sizes.begin(), layer_sizes.end(), 0U) != layer_sizes.end()) {
    throw Error(ErrorKind::invalid_argument, "layer sizes must be positive");
  }
  if (task == Task::classify_list && loss != Loss::bce) {
    throw Error(ErrorKind::invalid_argument, "classification trains with bce");
  }
  if (task == Task::sort_vector && loss != Loss::mse) {
    throw Error(ErrorKind::invalid_argument, "sorting trains with mse");
  }
  if (batch_size == 0) throw Error(ErrorKind::invalid_argument, "batch size must be >= 1");
}

void to_json(nlohmann::json& j, const TrainReport& r) {
  j = nlohmann::json{{"final_train_loss", r.final_train_loss},
                     {"train_accuracy", r.train_accuracy},
                     {"test_accuracy", r.test_accuracy},
                     {"parameter_count", r.parameter_count},
                     {"epochs_run", r.epochs_run},
                     {"restart_index", r.restart_index},
                     {"restarts_run", r.restarts_run},
                     {"diverged", r.diverged},
                     {"success", r.success},
                     {"optimizer", r.optimizer}};
}

DenseNetwork init_he(std::span<const std::size_t> layer_sizes, std::uint64_t seed,
                     Activation output) {
  if (layer_sizes.size() < 2) throw Error(ErrorKind::invalid_argument, "need >= 2 layer sizes");
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
    const std::size_t in = layer_sizes[l - 1];
    const std::size_t out = layer_sizes[l];
    DenseLayer layer{Matrix(out, in), std::vector<double>(out, 0.0),
                     l + 1 == layer_sizes.size() ? output : Activation::relu};
    const double stddev = std::sqrt(2.0 / static_cast<double>(in));
    for (double& w : layer.weights.data()) w = stddev * rng.normal();
    layers.push_back(std::move(layer));
  }
  return DenseNetwork(std::move(layers));
}

namespace {

double activation_slope(Activation a, double z, double activated) noexcept {
  switch (a) {
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
    case Activation::sigmoid: return activated * (1.0 - activated);
  }
  return 1.0;
}

double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Forward pass keeping every pre-activation and activation.
struct Tape {
  std::vector<std::vector<double>> pre;   // z per layer
  std::vector<std::vector<double>> post;  // a per layer, post[0] = input

  void run(const DenseNetwork& net, std::span<const double> input) {
    const auto& layers = net.layers();
    if (input.size() != net.input_size()) {
      throw Error(ErrorKind::dimension_mismatch, "sample input does not match network");
    }
    pre.resize(layers.size());
    post.resize(layers.size() + 1);
    post[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const DenseLayer& layer = layers[l];
      pre[l].resize(layer.out());
      post[l + 1].resize(layer.out());
      for (std::size_t r = 0; r < layer.out(); ++r) {
        double z = layer.biases[r];
        const auto w = layer.weights.row(r);
        for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * post[l][c];
        pre[l][r] = z;
        post[l + 1][r] = activate(layer.activation, z);
      }
    }
  }
};

double loss_from_tape(const DenseNetwork& net, Loss loss, const Tape& tape, const Sample& s) {
  if (s.target.size() != net.output_size()) {
    throw Error(ErrorKind::dimension_mismatch, "sample target does not match network");
  }
  if (loss == Loss::bce) {
    if (net.layers().back().activation != Activation::sigmoid) {
      throw Error(ErrorKind::invalid_argument, "bce needs a sigmoid output layer");
    }
    double total = 0.0;
    const auto& z = tape.pre.back();
    for (std::size_t k = 0; k < z.size(); ++k) total += softplus(z[k]) - s.target[k] * z[k];
    return total / static_cast<double>(z.size());
  }
  double total = 0.0;
  const auto& a = tape.post.back();
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - s.target[k];
    total += d * d;
  }
  return total / static_cast<double>(a.size());
}

struct Adam {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step_count = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  explicit Adam(const DenseNetwork& net) {
    for (const DenseLayer& l : net.layers()) {
      m.emplace_back(l.weights.size() + l.biases.size(), 0.0);
      v.emplace_back(l.weights.size() + l.biases.size(), 0.0);
    }
  }

  void step(DenseNetwork& net, const Gradients& g, double lr, double scale) {
    ++step_count;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    auto& layers = net.mutable_layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      auto w = layers[l].weights.data();
      auto gw = g.weights[l].data();
      auto update = [&](double& param, double grad, std::size_t k) {
        grad *= scale;
        m[l][k] = beta1 * m[l][k] + (1.0 - beta1) * grad;
        v[l][k] = beta2 * v[l][k] + (1.0 - beta2) * grad * grad;
        param -= lr * (m[l][k] / c1) / (std::sqrt(v[l][k] / c2) + epsilon);
      };
      for (std::size_t k = 0; k < w.size(); ++k) update(w[k], gw[k], k);
      for (std::size_t k = 0; k < layers[l].biases.size(); ++k) {
        update(layers[l].biases[k], g.biases[l][k], w.size() + k);
      }
    }
  }
};

double cosine_lr(double base, double final_fraction, std::size_t step, std::size_t total) {
  if (total <= 1) return base;
  const double t = static_cast<double>(step) / static_cast<double>(total - 1);
  const double floor = base * final_fraction;
  return floor + 0.5 * (base - floor) * (1.0 + std::cos(std::numbers::pi * t));
}

double mean_loss(const DenseNetwork& net, Loss loss, std::span<const Sample> data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const Sample& s : data) total += sample_loss(net, loss, s);
  return total / static_cast<double>(data.size());
}

bool all_finite(const DenseNetwork& net) {
  for (const DenseLayer& l : net.layers()) {
    for (double w : l.weights.data()) {
      if (!std::isfinite(w)) return false;
    }
    for (double b : l.biases) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

}  // namespace

Gradients::Gradients(const DenseNetwork& net) {
  for (const DenseLayer& l : net.layers()) {
    weights.emplace_back(l.out(), l.in());
    biases.emplace_back(l.out(), 0.0);
  }
}

void Gradients::zero() {
  for (auto& w : weights) std::fill(w.data().begin(), w.data().end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

double sample_loss(const DenseNetwork& net, Loss loss, const Sample& sample) {
  Tape tape;
  tape.run(net, sample.input);
  return loss_from_tape(net, loss, tape, sample);
}

double accumulate_gradient(const DenseNetwork& net, Loss loss, const Sample& sample,
                           Gradients& grad) {
  thread_local Tape tape;
  tape.run(net, sample.input);
  const double value = loss_from_tape(net, loss, tape, sample);

  const auto& layers = net.layers();
  const std::size_t last = layers.size() - 1;
  const auto outputs = static_cast<double>(layers[last].out());
  std::vector<double> delta(layers[last].out());
  for (std::size_t k = 0; k < delta.size(); ++k) {
    if (loss == Loss::bce) {
      // d/dz [softplus(z) - y z] = sigmoid(z) - y
      delta[k] = (tape.post[last + 1][k] - sample.target[k]) / outputs;
    } else {
      const double a = tape.post[last + 1][k];
      delta[k] = 2.0 * (a - sample.target[k]) / outputs *
                 activation_slope(layers[last].activation, tape.pre[last][k], a);
    }
  }
  std::vector<double> prev_delta;
  for (std::size_t l = layers.size(); l-- > 0;) {
    const DenseLayer& layer = layers[l];
    const auto& input = tape.post[l];
    for (std::size_t r = 0; r < layer.out(); ++r) {
      auto gw = grad.weights[l].row(r);
      for (std::size_t c = 0; c < gw.size(); ++c) gw[c] += delta[r] * input[c];
      grad.biases[l][r] += delta[r];
    }
    if (l == 0) break;
    const DenseLayer& below = layers[l - 1];
    prev_delta.assign(layer.in(), 0.0);
    for (std::size_t r = 0; r < layer.out(); ++r) {
      const auto w = layer.weights.row(r);
      for (std::size_t c = 0; c < w.size(); ++c) prev_delta[c] += w[c] * delta[r];
    }
    for (std::size_t c = 0; c < prev_delta.size(); ++c) {
      prev_delta[c] *= activation_slope(below.activation, tape.pre[l - 1][c], tape.post[l][c]);
    }
    delta.swap(prev_delta);
  }
  return value;
}

double accuracy(const DenseNetwork& net, Task task, std::span<const Sample> data) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Sample& s : data) {
    const std::vector<double> out = net.forward(s.input);
    bool ok = true;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (task == Task::classify_list) {
        ok = ok && ((out[k] >= 0.5) == (s.target[k] >= 0.5));
      } else {
        ok = ok && std::abs(out[k] - s.target[k]) < 1e-2;
      }
    }
    hits += ok ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

std::vector<Sample> list_samples(std::span<const NumberListSample> lists, bool sorted) {
  std::vector<Sample> out;
  out.reserve(lists.size());
  for (const NumberListSample& l : lists) {
    const auto& view = sorted ? l.sorted_view : l.values;
    out.push_back({std::vector<double>(view.begin(), view.end()),
                   {l.label == ClassLabel::one ? 1.0 : 0.0}});
  }
  return out;
}

TrainResult train(const TrainConfig& config, std::span<const Sample> train_data,
                  std::span<const Sample> test_data) {
  config.validate();
  if (train_data.empty()) throw Error(ErrorKind::invalid_argument, "empty training set");
  for (const Sample& s : train_data) {
    if (s.input.size() != config.layer_sizes.front() ||
        s.target.size() != config.layer_sizes.back()) {
      throw Error(ErrorKind::dimension_mismatch, "sample shape does not match layer sizes");
    }
  }
  TrainResult result{init_he(config.layer_sizes, config.seed, config.output_activation()), {}};
  DenseNetwork& net = result.network;
  Adam adam(net);
  Gradients grad(net);
  Rng rng(config.seed, 1);

  std::vector<std::size_t> order(train_data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t batches = (order.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t total_steps = batches * config.epochs;
  std::size_t step = 0;

  TrainReport& report = result.report;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b = 0; b < batches; ++b) {
      grad.zero();
      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      for (std::size_t i = begin; i < end; ++i) {
        accumulate_gradient(net, config.loss, train_data[order[i]], grad);
      }
      const double lr = cosine_lr(config.learning_rate, config.final_lr_fraction, step++, total_steps);
      adam.step(net, grad, lr, 1.0 / static_cast<double>(end - begin));
    }
    report.epochs_run = epoch + 1;
    if (!all_finite(net)) {
      report.diverged = true;
      break;
    }
  }
  report.parameter_count = net.parameter_count(ParameterCounting::weights_and_biases);
  if (report.diverged) {
    report.final_train_loss = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  report.final_train_loss = mean_loss(net, config.loss, train_data);
  report.diverged = !std::isfinite(report.final_train_loss);
  report.train_accuracy = accuracy(net, config.task, train_data);
  report.test_accuracy = accuracy(net, config.task, test_data);
  return result;
}

namespace {

Sample random_sort_sample(Rng& rng, std::size_t wires) {
  Sample s;
  s.input.resize(wires);
  for (double& v : s.input) v = rng.uniform01();
  s.target = s.input;
  std::sort(s.target.begin(), s.target.end());
  return s;
}

}  // namespace

TrainResult train_sorter(std::span<const std::size_t> layer_sizes, std::size_t restart,
                         const SortTrainingOptions& options) {
  if (layer_sizes.size() < 2 || layer_sizes.front() != layer_sizes.back()) {
    throw Error(ErrorKind::invalid_argument, "sorter layer sizes must start and end with x");
  }
  const std::size_t wires = layer_sizes.front();
  const std::uint64_t restart_seed = substream_seed(options.seed, restart);
  TrainResult result{init_he(layer_sizes, restart_seed, Activation::identity), {}};
  DenseNetwork& net = result.network;
  Adam adam(net);
  Gradients grad(net);
  Rng data_rng(restart_seed, 1);

  TrainReport& report = result.report;
  report.restart_index = restart;
  for (std::size_t step = 0; step < options.steps; ++step) {
    grad.zero();
    for (std::size_t i = 0; i < options.batch_size; ++i) {
      accumulate_gradient(net, Loss::mse, random_sort_sample(data_rng, wires), grad);
    }
    adam.step(net, grad, cosine_lr(options.learning_rate, options.final_lr_fraction, step, options.steps),
              1.0 / static_cast<double>(options.batch_size));
    report.epochs_run = step + 1;
    if ((step & 255U) == 0 && !all_finite(net)) {
      report.diverged = true;
      break;
    }
  }
  report.parameter_count = net.parameter_count(ParameterCounting::weights_and_biases);

  // held-out evaluation set, identical for every restart
  Rng eval_rng(options.seed, ~std::uint64_t{0});
  std::vector<Sample> eval;
  eval.reserve(options.eval_samples);
  for (std::size_t i = 0; i < options.eval_samples; ++i) eval.push_back(random_sort_sample(eval_rng, wires));
  report.final_train_loss = report.diverged ? std::numeric_limits<double>::quiet_NaN()
                                            : mean_loss(net, Loss::mse, eval);
  report.diverged = report.diverged || !std::isfinite(report.final_train_loss);
  if (!report.diverged) {
    report.train_accuracy = accuracy(net, Task::sort_vector, eval);
    report.test_accuracy = report.train_accuracy;
  }
  report.success = !report.diverged && report.final_train_loss < options.success_threshold;
  return result;
}

TrainResult learn_to_sort(std::size_t wires, std::span<const std::size_t> layer_sizes,
                          std::size_t restarts, const SortTrainingOptions& options) {
  if (layer_sizes.size() < 2 || layer_sizes.front() != wires || layer_sizes.back() != wires) {
    throw Error(ErrorKind::invalid_argument, "layer sizes must start and end with x");
  }
  if (restarts == 0) throw Error(ErrorKind::invalid_argument, "need at least one restart");

  std::optional<TrainResult> best;
  const std::size_t wave = std::max<std::size_t>(1, worker_count());
  std::size_t run = 0;
  for (std::size_t start = 0; start < restarts; start += wave) {
    const std::size_t count = std::min(wave, restarts - start);
    std::vector<std::optional<TrainResult>> results(count);
    parallel_for(count, [&](std::size_t k) { results[k] = train_sorter(layer_sizes, start + k, options); });
    // scan in restart order so the outcome does not depend on the wave size
    for (auto& r : results) {
      ++run;
      const bool better = !best || (!r->report.diverged &&
                                    (best->report.diverged ||
                                     r->report.final_train_loss < best->report.final_train_loss));
      if (r->report.success) {
        best = std::move(*r);
        best->report.restarts_run = run;
        return std::move(*best);
      }
      if (better) best = std::move(*r);
    }
  }
  best->report.restarts_run = run;
  return std::move(*best);
}

double kink_distance(const DenseNetwork& net, std::span<const double> input) {
  Tape tape;
  tape.run(net, input);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    if (net.layers()[l].activation != Activation::relu) continue;
    for (double z : tape.pre[l]) best = std::min(best, std::abs(z));
  }
  return best;
}

Sample perturb_off_kinks(const DenseNetwork& net, Sample sample, std::uint64_t seed, double margin,
                         std::size_t tries) {
  Rng rng(seed);
  const Sample original = sample;
  double scale = 1e-2;
  for (std::size_t t = 0; t < tries && kink_distance(net, sample.input) < margin; ++t) {
    sample = original;
    for (double& v : sample.input) v += scale * (2.0 * rng.uniform01() - 1.0);
    if (t % 100 == 99) scale *= 2.0;
  }
  return sample;
}

double gradient_check(const DenseNetwork& net, Loss loss, const Sample& sample, double step) {
  Gradients analytic(net);
  accumulate_gradient(net, loss, sample, analytic);

  DenseNetwork probe = net;
  double worst = 0.0;
  auto check = [&](double& param, double grad) {
    const double saved = param;
    param = saved + step;
    const double up = sample_loss(probe, loss, sample);
    param = saved - step;
    const double down = sample_loss(probe, loss, sample);
    param = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max(std::abs(grad) + std::abs(numeric), 1e-6);
    worst = std::max(worst, std::abs(grad - numeric) / denom);
  };
  auto& layers = probe.mutable_layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto w = layers[l].weights.data();
    auto gw = analytic.weights[l].data();
    for (std::size_t k = 0; k < w.size(); ++k) check(w[k], gw[k]);
    for (std::size_t k = 0; k < layers[l].biases.size(); ++k) {
      check(layers[l].biases[k], analytic.biases[l][k]);
    }
  }
  return worst;
}

}  // namespace sortnetc
