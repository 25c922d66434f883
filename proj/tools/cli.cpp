#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sortnetc/datagen.hpp"
#include "sortnetc/error.hpp"
#include "sortnetc/locality.hpp"
#include "sortnetc/microtrain.hpp"
#include "sortnetc/nncompiler.hpp"
#include "sortnetc/nnruntime.hpp"
#include "sortnetc/patchcodec.hpp"
#include "sortnetc/pipeline.hpp"
#include "sortnetc/rng.hpp"
#include "sortnetc/sortnet.hpp"

namespace sortnetc::cli {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::file_io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::file_io, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::file_io, "failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::file_io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse_error, "not a number: '" + item + "'");
    }
  }
  return values;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Options shared by every leaf command.
struct Common {
  std::string report_path;
};

void add_report_option(CLI::App* sub, Common& common) {
  sub->add_option("--report", common.report_path, "Write the run report JSON to this file");
}

// ---------------------------------------------------------------- datagen

struct DatagenIdentityArgs {
  DatasetConfig cfg;
  bool unbalanced = false;
  std::string out_dir;
};

RunReport run_datagen_identity(DatagenIdentityArgs& a) {
  a.cfg.balanced = !a.unbalanced;
  const DatasetManifest manifest = generate_identity_dataset(a.cfg);
  write_dataset(manifest, a.out_dir);

  RunReport r;
  r.command = "datagen identity";
  r.seed = a.cfg.seed;
  r.config = manifest_to_json(DatasetManifest{a.cfg, {}})["config"];
  r.config["rng"] = kRngName;
  r.outputs["dataset"] = a.out_dir;
  r.outputs["manifest"] = (std::filesystem::path(a.out_dir) / "manifest.json").string();
  std::size_t ones = 0;
  for (const auto& img : manifest.images) ones += img.label == ClassLabel::one ? 1 : 0;
  r.metrics["images"] = static_cast<double>(manifest.images.size());
  r.metrics["class_one"] = static_cast<double>(ones);
  r.metrics["class_two"] = static_cast<double>(manifest.images.size() - ones);
  return r;
}

struct DatagenListArgs {
  std::size_t count = 5000;
  std::uint64_t seed = 0;
  bool sorted = false;
  std::string out;
};

RunReport run_datagen_lists(const DatagenListArgs& a) {
  const auto samples = generate_list_dataset(a.count, a.seed);
  write_list_csv(samples, a.sorted, a.out);
  RunReport r;
  r.command = "datagen lists";
  r.seed = a.seed;
  r.config = {{"count", a.count}, {"sorted", a.sorted}, {"rng", kRngName}};
  r.outputs["csv"] = a.out;
  std::size_t ones = 0;
  for (const auto& s : samples) ones += s.label == ClassLabel::one ? 1 : 0;
  r.metrics["samples"] = static_cast<double>(samples.size());
  r.metrics["class_one"] = static_cast<double>(ones);
  r.metrics["class_two"] = static_cast<double>(samples.size() - ones);
  return r;
}

// ---------------------------------------------------------------- sortnet

struct SortnetGenArgs {
  std::string kind = "merge";
  std::size_t wires = 4;
  std::string out;
};

RunReport run_sortnet_gen(const SortnetGenArgs& a, std::ostream& out, bool& wrote_stdout) {
  SortingNetwork net = a.kind == "optimal" ? make_optimal_small(a.wires)
                       : a.kind == "brick" ? make_brick_network(a.wires)
                                           : make_merge_network(a.wires);
  const std::string text = json(net).dump() + "\n";
  RunReport r;
  r.command = "sortnet gen";
  r.config = {{"kind", a.kind}, {"wires", a.wires}};
  if (a.out.empty()) {
    out << text;
    wrote_stdout = true;
  } else {
    write_text_file(a.out, text);
    r.outputs["network"] = a.out;
  }
  const DepthBound b = depth_bounds(std::max<std::size_t>(a.wires, 2));
  r.metrics["wires"] = static_cast<double>(net.wires());
  r.metrics["depth"] = static_cast<double>(net.depth());
  r.metrics["comparators"] = static_cast<double>(net.comparator_count());
  r.metrics["depth_lower_bound"] = static_cast<double>(b.chosen_depth);
  r.metrics["kahale_depth"] = b.kahale;
  return r;
}

struct SortnetVerifyArgs {
  std::string file;
  std::size_t repeat = 1;
  std::size_t cap = kDefaultZeroOneCap;
  std::uint64_t random_vectors = 100'000;
  std::uint64_t seed = 0;
};

RunReport run_sortnet_verify(const SortnetVerifyArgs& a) {
  const SortingNetwork base = network_from_json(read_json_file(a.file));
  const SortingNetwork net = repeat_network(base, a.repeat);
  const VerificationReport v =
      verify_network(net, VerifyOptions{a.cap, a.random_vectors, a.seed});
  RunReport r;
  r.command = "sortnet verify";
  r.seed = a.seed;
  r.config = {{"file", a.file}, {"repeat", a.repeat}, {"exhaustive_cap", a.cap},
              {"random_vectors", a.random_vectors}};
  r.metrics["passed"] = v.passed ? 1 : 0;
  r.metrics["probabilistic"] = v.probabilistic ? 1 : 0;
  r.metrics["vectors_tested"] = static_cast<double>(v.vectors_tested);
  r.metrics["wires"] = static_cast<double>(net.wires());
  r.metrics["depth"] = static_cast<double>(net.depth());
  r.details["passed"] = v.passed;
  if (v.counterexample) r.details["counterexample"] = *v.counterexample;
  if (v.probabilistic) r.warnings.push_back("randomized verification: a pass is not a proof");
  return r;
}

// ---------------------------------------------------------------- compile / eval

struct CompileArgs {
  std::string in;
  std::string out;
  bool prune = false;
};

RunReport run_compile(const CompileArgs& a, std::ostream& out, bool& wrote_stdout) {
  const SortingNetwork net = network_from_json(read_json_file(a.in));
  const DenseNetwork model = compile(net, a.prune);
  const std::string text = json(model).dump() + "\n";
  RunReport r;
  r.command = "compile";
  r.config = {{"in", a.in}, {"prune", a.prune}};
  if (a.out.empty()) {
    out << text;
    wrote_stdout = true;
  } else {
    write_text_file(a.out, text);
    r.outputs["model"] = a.out;
  }
  r.metrics["wires"] = static_cast<double>(net.wires());
  r.metrics["depth"] = static_cast<double>(net.depth());
  r.metrics["dense_layers"] = static_cast<double>(model.layers().size());
  r.metrics["weights_only"] = static_cast<double>(model.parameter_count(ParameterCounting::weights_only));
  r.metrics["weights_and_biases"] =
      static_cast<double>(model.parameter_count(ParameterCounting::weights_and_biases));
  r.metrics["formula_2d_ceil15x_x"] =
      static_cast<double>(feedforward_parameters(net.wires(), net.depth()));
  return r;
}

struct EvalArgs {
  std::string model;
  std::string values;
};

RunReport run_eval(const EvalArgs& a, std::ostream& out, bool& wrote_stdout) {
  const DenseNetwork model = model_from_json(read_json_file(a.model));
  const std::vector<double> input = parse_doubles(a.values);
  const std::vector<double> output = model.forward(input);
  for (std::size_t i = 0; i < output.size(); ++i) out << (i ? "," : "") << format_double(output[i]);
  out << "\n";
  wrote_stdout = true;
  RunReport r;
  r.command = "eval";
  r.config = {{"model", a.model}, {"input", input}};
  r.details["output"] = output;
  r.metrics["outputs"] = static_cast<double>(output.size());
  return r;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::uint64_t image = 224;
  std::uint64_t patch = 8;
  bool attention = false;
  std::optional<std::uint64_t> depth;
  std::string position_rule = "grid";
  std::string format = "json";
};

RunReport run_estimate(const EstimateArgs& a, std::ostream& out, bool& wrote_stdout) {
  const PositionRule rule = a.position_rule == "sliding" ? PositionRule::sliding_window
                            : a.position_rule == "stated" ? PositionRule::stated_formula
                                                          : PositionRule::grid_offsets;
  const ParamScenario s = estimate_parameters(a.image, a.patch, a.attention, a.depth, rule);
  RunReport r;
  r.command = "estimate";
  r.config = {{"image", a.image}, {"patch", a.patch}, {"attention", a.attention},
              {"depth", a.depth ? json(*a.depth) : json("info_theoretic_ceil")},
              {"position_rule", a.position_rule}, {"format", a.format}};
  r.metrics["x"] = static_cast<double>(s.numbers);
  r.metrics["d"] = static_cast<double>(s.depth);
  r.metrics["p_feedforward"] = static_cast<double>(s.p_feedforward);
  r.metrics["p_iterative"] = static_cast<double>(s.p_iterative);
  r.metrics["p_iterative_depth4"] = static_cast<double>(s.p_iterative_depth4);
  if (!a.attention && a.image == 224 && a.patch == 8 && s.depth == 16) {
    r.metrics["p_feedforward_x36864"] = static_cast<double>(feedforward_parameters(36'864, 16));
  }
  r.warnings = s.warnings;
  r.details["scenario"] = s;
  if (a.format == "csv") {
    out << "image_side,patch_side,attention,x,d,p_feedforward,p_iterative,p_iterative_depth4\n"
        << s.image_side << ',' << s.patch_side << ',' << (s.attention ? 1 : 0) << ',' << s.numbers
        << ',' << s.depth << ',' << s.p_feedforward << ',' << s.p_iterative << ','
        << s.p_iterative_depth4 << '\n';
    wrote_stdout = true;
  }
  return r;
}

// ---------------------------------------------------------------- locality

struct LocalityArgs {
  std::size_t patch_side = 3;
  std::size_t levels = 30;
  std::string format = "csv";
};

RunReport run_locality(const LocalityArgs& a, std::ostream& out, bool& wrote_stdout) {
  const LocalityTrace t = trace_identity_locality(a.patch_side, a.levels);
  RunReport r;
  r.command = "locality";
  r.config = {{"patch_side", a.patch_side}, {"levels", a.levels}, {"format", a.format}};
  r.metrics["locality_estimate"] = t.locality_estimate;
  r.metrics["analytic_bound"] = t.analytic_bound;
  r.metrics["levels"] = static_cast<double>(a.levels);
  double max_exact_error = 0.0;
  for (const ExactLevel& e : exact_levels(a.patch_side)) max_exact_error = std::max(max_exact_error, e.abs_error);
  r.metrics["max_exact_log2_error"] = max_exact_error;
  json rows = json::array();
  for (const LocalityLevel& l : t.levels) {
    rows.push_back({{"level", l.level}, {"L", l.log2_cardinality},
                    {"C", l.level == 0 ? json(nullptr) : json(l.compression_factor)},
                    {"rfs", l.receptive_field_size}});
  }
  r.details["levels"] = rows;
  if (a.format == "csv") {
    out << "level,L,C,rfs\n";
    for (const LocalityLevel& l : t.levels) {
      out << l.level << ',' << format_double(l.log2_cardinality) << ','
          << (l.level == 0 ? std::string() : format_double(l.compression_factor)) << ','
          << format_double(l.receptive_field_size) << '\n';
    }
    wrote_stdout = true;
  }
  return r;
}

// ---------------------------------------------------------------- train

std::vector<std::size_t> parse_layers(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (double v : parse_doubles(text)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw Error(ErrorKind::parse_error, "layer sizes must be positive integers");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return sizes;
}

void append_csv_row(const std::string& path, const std::string& header, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorKind::file_io, "cannot open " + path);
  if (fresh) out << header << '\n';
  out << row << '\n';
}

std::string report_csv_row(const std::string& label, const TrainReport& t) {
  std::ostringstream ss;
  ss << label << ',' << format_double(t.final_train_loss) << ',' << format_double(t.train_accuracy)
     << ',' << format_double(t.test_accuracy) << ',' << t.parameter_count << ',' << t.epochs_run
     << ',' << t.restart_index << ',' << t.restarts_run << ',' << (t.diverged ? 1 : 0) << ','
     << (t.success ? 1 : 0) << ',' << t.optimizer;
  return ss.str();
}

constexpr const char* kTrainCsvHeader =
    "run,final_train_loss,train_accuracy,test_accuracy,parameter_count,epochs_run,restart_index,"
    "restarts_run,diverged,success,optimizer";

void fill_train_metrics(RunReport& r, const TrainReport& t) {
  r.metrics["final_train_loss"] = t.final_train_loss;
  r.metrics["train_accuracy"] = t.train_accuracy;
  r.metrics["test_accuracy"] = t.test_accuracy;
  r.metrics["parameter_count"] = static_cast<double>(t.parameter_count);
  r.metrics["epochs_run"] = static_cast<double>(t.epochs_run);
  r.metrics["restart_index"] = static_cast<double>(t.restart_index);
  r.metrics["diverged"] = t.diverged ? 1 : 0;
  r.details["train_report"] = t;
  r.warnings.push_back("optimizer: Adam substituted for Ranger");
  if (t.diverged) r.warnings.push_back("training diverged (non-finite loss)");
}

struct TrainClassifyArgs {
  bool sorted = false;
  bool unsorted = false;
  std::string layers = "10,10,1";
  std::size_t train_count = 4000;
  std::size_t test_count = 1000;
  std::uint64_t seed = 0;
  TrainConfig cfg;
  std::string csv;
  std::string model_out;
};

RunReport run_train_classify(TrainClassifyArgs& a) {
  if (a.sorted == a.unsorted) throw Error(ErrorKind::invalid_argument, "pass exactly one of --sorted / --unsorted");
  a.cfg.layer_sizes = parse_layers(a.layers);
  a.cfg.task = Task::classify_list;
  a.cfg.loss = Loss::bce;
  a.cfg.seed = a.seed;
  const auto lists = generate_list_dataset(a.train_count + a.test_count, a.seed);
  const auto all = list_samples(lists, a.sorted);
  const std::span<const Sample> data(all);
  const TrainResult result =
      train(a.cfg, data.first(a.train_count), data.subspan(a.train_count));

  RunReport r;
  r.command = "train classify";
  r.seed = a.seed;
  r.config = {{"input", a.sorted ? "sorted" : "unsorted"}, {"layers", a.cfg.layer_sizes},
              {"train", a.train_count}, {"test", a.test_count}, {"epochs", a.cfg.epochs},
              {"batch_size", a.cfg.batch_size}, {"learning_rate", a.cfg.learning_rate},
              {"optimizer", kOptimizerName}, {"loss", "bce"}, {"rng", kRngName}};
  if (a.train_count == 40'000) {
    r.warnings.push_back("large set uses 40,000 samples as in the results table; the text also mentions 50,000");
  }
  fill_train_metrics(r, result.report);
  if (!a.csv.empty()) {
    append_csv_row(a.csv, kTrainCsvHeader,
                   report_csv_row(a.sorted ? "classify_sorted" : "classify_unsorted", result.report));
    r.outputs["csv"] = a.csv;
  }
  if (!a.model_out.empty()) {
    write_text_file(a.model_out, json(result.network).dump() + "\n");
    r.outputs["model"] = a.model_out;
  }
  return r;
}

struct TrainSortArgs {
  std::size_t x = 3;
  std::string layers = "3,7,6,3";
  std::size_t restarts = 100;
  bool strict = false;
  SortTrainingOptions options;
  std::string csv;
  std::string model_out;
};

RunReport run_train_sort(TrainSortArgs& a) {
  if (a.strict) a.options.success_threshold = 1e-5;
  const auto sizes = parse_layers(a.layers);
  const TrainResult result = learn_to_sort(a.x, sizes, a.restarts, a.options);
  RunReport r;
  r.command = "train sort";
  r.seed = a.options.seed;
  r.config = {{"x", a.x}, {"layers", sizes}, {"restarts", a.restarts},
              {"threshold", a.options.success_threshold}, {"steps", a.options.steps},
              {"batch_size", a.options.batch_size}, {"learning_rate", a.options.learning_rate},
              {"optimizer", kOptimizerName}, {"loss", "mse"}, {"rng", kRngName}};
  fill_train_metrics(r, result.report);
  r.metrics["success"] = result.report.success ? 1 : 0;
  r.metrics["restarts_run"] = static_cast<double>(result.report.restarts_run);
  if (!result.report.success) {
    r.warnings.push_back("no restart reached the loss threshold; best restart reported");
  }
  if (!a.csv.empty()) {
    append_csv_row(a.csv, kTrainCsvHeader, report_csv_row("sort_x" + std::to_string(a.x), result.report));
    r.outputs["csv"] = a.csv;
  }
  if (!a.model_out.empty()) {
    write_text_file(a.model_out, json(result.network).dump() + "\n");
    r.outputs["model"] = a.model_out;
  }
  return r;
}

// ---------------------------------------------------------------- codec

struct CodecArgs {
  std::string patch_file;
  std::string mantissa = "exact";
  std::size_t side = 4;
};

RunReport run_codec_encode(const CodecArgs& a, std::ostream& out, bool& wrote_stdout) {
  const PrecisionModel precision = precision_from_string(a.mantissa);
  const Patch patch = Patch::from_ascii(read_text_file(a.patch_file));
  const PatchCode code = encode(patch, precision);
  const DecodeResult back = decode(code);
  out << format_double(code.value()) << "\n";
  wrote_stdout = true;
  RunReport r;
  r.command = "codec encode";
  r.config = {{"patch_file", a.patch_file}, {"mantissa", precision.name()}};
  r.metrics["code"] = code.value();
  r.metrics["side"] = static_cast<double>(patch.side());
  r.metrics["lossy"] = back.lossy ? 1 : 0;
  r.metrics["round_trip"] = back.patch == patch ? 1 : 0;
  r.details["decoded"] = back.patch.to_ascii();
  if (back.lossy) {
    r.warnings.push_back(std::to_string(patch.pixel_count()) + " pixels exceed the " +
                         precision.name() + "-bit mantissa; trailing bits were dropped");
  }
  return r;
}

RunReport run_codec_injective(const CodecArgs& a) {
  const PrecisionModel precision = precision_from_string(a.mantissa);
  const InjectivityReport rep = check_injectivity(a.side, precision);
  RunReport r;
  r.command = "codec injective";
  r.config = {{"side", a.side}, {"mantissa", precision.name()}};
  r.metrics["injective"] = rep.injective ? 1 : 0;
  r.metrics["patches_checked"] = static_cast<double>(rep.patches_checked);
  if (rep.collision) {
    r.details["collision"] = {rep.collision->first.to_ascii(), rep.collision->second.to_ascii()};
  }
  return r;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
  std::string dataset;
  std::string mantissa = "24";
};

RunReport run_pipeline_cmd(const PipelineArgs& a) {
  const PrecisionModel precision = precision_from_string(a.mantissa);
  const DatasetManifest dataset = read_dataset(a.dataset);
  const PipelineSummary s = run_pipeline(dataset, precision);
  RunReport r;
  r.command = "pipeline run";
  r.seed = dataset.config.seed;
  r.config = {{"dataset", a.dataset}, {"mantissa", precision.name()},
              {"sorter_capacity", dataset.config.max_patches}};
  const auto n = static_cast<double>(s.images);
  r.metrics["images"] = n;
  r.metrics["accuracy_vs_oracle"] = n > 0 ? static_cast<double>(s.agree_with_oracle) / n : 0.0;
  r.metrics["accuracy_vs_stored"] = n > 0 ? static_cast<double>(s.agree_with_stored) / n : 0.0;
  r.metrics["stored_label_soundness"] = n > 0 ? static_cast<double>(s.stored_matches_oracle) / n : 0.0;
  json verdicts = json::array();
  for (std::size_t i = 0; i < s.images; ++i) {
    const PipelineVerdict& v = s.verdicts[i];
    verdicts.push_back({{"image", image_file_name(i)},
                        {"predicted", to_string(v.predicted_class)},
                        {"oracle", to_string(s.oracle_labels[i])},
                        {"stored", to_string(dataset.images[i].label)},
                        {"patch_count", v.patch_count},
                        {"max_run_length", v.max_run_length},
                        {"sorted_codes", v.sorted_codes}});
  }
  r.details["verdicts"] = std::move(verdicts);
  return r;
}

}  // namespace

DispatchResult dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sortnetc: sorting networks compiled to ReLU networks, and the identity task"};
  app.require_subcommand(1);
  Common common;

  // datagen
  auto* datagen = app.add_subcommand("datagen", "Generate datasets");
  datagen->require_subcommand(1);
  DatagenIdentityArgs di;
  auto* dg_id = datagen->add_subcommand("identity", "Identity-task images (PGM + manifest.json)");
  dg_id->add_option("--image-side", di.cfg.image_side)->capture_default_str();
  dg_id->add_option("--patch-side", di.cfg.patch_side)->capture_default_str();
  dg_id->add_option("--min-patches", di.cfg.min_patches)->capture_default_str();
  dg_id->add_option("--max-patches", di.cfg.max_patches)->capture_default_str();
  dg_id->add_option("--count", di.cfg.sample_count)->capture_default_str();
  dg_id->add_option("--seed", di.cfg.seed)->capture_default_str();
  dg_id->add_option("--max-attempts", di.cfg.max_attempts)->capture_default_str();
  dg_id->add_flag("--unbalanced", di.unbalanced, "Draw labels at random instead of 50/50");
  dg_id->add_option("--out", di.out_dir)->required();
  add_report_option(dg_id, common);
  DatagenListArgs dl;
  auto* dg_lists = datagen->add_subcommand("lists", "Ten-number lists (CSV: v0..v9,label)");
  dg_lists->add_option("--count", dl.count)->capture_default_str();
  dg_lists->add_option("--seed", dl.seed)->capture_default_str();
  dg_lists->add_flag("--sorted", dl.sorted, "Write the sorted view");
  dg_lists->add_option("--out", dl.out)->required();
  add_report_option(dg_lists, common);

  // sortnet
  auto* sortnet = app.add_subcommand("sortnet", "Generate and verify sorting networks");
  sortnet->require_subcommand(1);
  SortnetGenArgs sg;
  auto* sn_gen = sortnet->add_subcommand("gen", "Emit a network as JSON");
  sn_gen->add_option("--kind", sg.kind)->check(CLI::IsMember({"optimal", "merge", "brick"}))->capture_default_str();
  sn_gen->add_option("--wires", sg.wires)->required();
  sn_gen->add_option("--out", sg.out, "Output file (stdout when omitted)");
  add_report_option(sn_gen, common);
  SortnetVerifyArgs sv;
  auto* sn_verify = sortnet->add_subcommand("verify", "Zero-one verification");
  sn_verify->add_option("--file", sv.file)->required();
  sn_verify->add_option("--repeat", sv.repeat, "Apply the network this many times")->capture_default_str();
  sn_verify->add_option("--cap", sv.cap, "Largest wire count checked exhaustively")->capture_default_str();
  sn_verify->add_option("--random-vectors", sv.random_vectors)->capture_default_str();
  sn_verify->add_option("--seed", sv.seed)->capture_default_str();
  add_report_option(sn_verify, common);

  // compile / eval
  CompileArgs ca;
  auto* comp = app.add_subcommand("compile", "Lower a sorting network to a ReLU network");
  comp->add_option("--in", ca.in)->required();
  comp->add_option("--out", ca.out, "Model file (stdout when omitted)");
  comp->add_flag("--prune", ca.prune, "Drop padding neurons");
  add_report_option(comp, common);
  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Run a model on one input vector");
  eval->add_option("--model", ea.model)->required();
  eval->add_option("--values", ea.values, "Comma-separated input")->required();
  add_report_option(eval, common);

  // estimate
  EstimateArgs es;
  auto* est = app.add_subcommand("estimate", "Parameter counts of compiled sorters for an image task");
  est->add_option("--image", es.image)->capture_default_str();
  est->add_option("--patch", es.patch)->capture_default_str();
  est->add_flag("--attention", es.attention);
  est->add_option("--depth", es.depth, "Explicit depth (default ceil(log2 x))");
  est->add_option("--position-rule", es.position_rule)
      ->check(CLI::IsMember({"grid", "sliding", "stated"}))
      ->capture_default_str();
  est->add_option("--format", es.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_report_option(est, common);

  // locality
  LocalityArgs la;
  auto* loc = app.add_subcommand("locality", "Compression factors of the identity task hierarchy");
  loc->add_option("--patch-side", la.patch_side)->capture_default_str();
  loc->add_option("--levels", la.levels)->capture_default_str();
  loc->add_option("--format", la.format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_report_option(loc, common);

  // train
  auto* tr = app.add_subcommand("train", "Train dense networks");
  tr->require_subcommand(1);
  TrainClassifyArgs tc;
  auto* tr_cls = tr->add_subcommand("classify", "Classify ten-number lists (>= 5 equal values)");
  tr_cls->add_flag("--sorted", tc.sorted);
  tr_cls->add_flag("--unsorted", tc.unsorted);
  tr_cls->add_option("--layers", tc.layers)->capture_default_str();
  tr_cls->add_option("--train", tc.train_count)->capture_default_str();
  tr_cls->add_option("--test", tc.test_count)->capture_default_str();
  tr_cls->add_option("--seed", tc.seed)->capture_default_str();
  tr_cls->add_option("--epochs", tc.cfg.epochs)->capture_default_str();
  tr_cls->add_option("--batch", tc.cfg.batch_size)->capture_default_str();
  tr_cls->add_option("--lr", tc.cfg.learning_rate)->capture_default_str();
  tr_cls->add_option("--csv", tc.csv, "Append a CSV result row");
  tr_cls->add_option("--model-out", tc.model_out);
  add_report_option(tr_cls, common);
  TrainSortArgs ts;
  auto* tr_sort = tr->add_subcommand("sort", "Learn to sort x numbers from data");
  tr_sort->add_option("--x", ts.x)->capture_default_str();
  tr_sort->add_option("--layers", ts.layers)->capture_default_str();
  tr_sort->add_option("--restarts", ts.restarts)->capture_default_str();
  tr_sort->add_option("--seed", ts.options.seed)->capture_default_str();
  tr_sort->add_option("--steps", ts.options.steps)->capture_default_str();
  tr_sort->add_option("--batch", ts.options.batch_size)->capture_default_str();
  tr_sort->add_option("--lr", ts.options.learning_rate)->capture_default_str();
  tr_sort->add_option("--threshold", ts.options.success_threshold)->capture_default_str();
  tr_sort->add_flag("--strict", ts.strict, "Use the 1e-5 success threshold");
  tr_sort->add_option("--csv", ts.csv, "Append a CSV result row");
  tr_sort->add_option("--model-out", ts.model_out);
  add_report_option(tr_sort, common);

  // codec
  auto* codec = app.add_subcommand("codec", "Patch encoding kernel");
  codec->require_subcommand(1);
  CodecArgs co;
  auto* co_enc = codec->add_subcommand("encode", "Encode an ASCII 0/1 patch into one real code");
  co_enc->add_option("--patch-file", co.patch_file)->required();
  co_enc->add_option("--mantissa", co.mantissa, "24, 53 or exact")->capture_default_str();
  add_report_option(co_enc, common);
  auto* co_inj = codec->add_subcommand("injective", "Exhaustive injectivity check for n x n patches");
  co_inj->add_option("--side", co.side)->capture_default_str();
  co_inj->add_option("--mantissa", co.mantissa, "24, 53 or exact")->capture_default_str();
  add_report_option(co_inj, common);

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "End-to-end identity-task classification");
  pipe->require_subcommand(1);
  PipelineArgs pa;
  auto* pipe_run = pipe->add_subcommand("run", "Classify a generated dataset");
  pipe_run->add_option("--dataset", pa.dataset)->required();
  pipe_run->add_option("--mantissa", pa.mantissa, "24, 53 or exact")->capture_default_str();
  add_report_option(pipe_run, common);

  std::vector<std::string> argv_storage{"sortnetc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return {0, std::nullopt};
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return {0, std::nullopt};
  } catch (const CLI::ParseError& e) {
    std::string kind = "invalid-flag";
    if (args.empty()) {
      kind = "usage";
    } else if (!args.front().starts_with("-") && app.get_subcommand_no_throw(args.front()) == nullptr) {
      kind = "unknown-command";
    }
    err << json{{"error", {{"kind", kind}, {"message", e.what()}}}}.dump() << "\n";
    err << app.help();
    return {2, std::nullopt};
  }

  bool wrote_stdout = false;
  RunReport report;
  try {
    if (dg_id->parsed()) report = run_datagen_identity(di);
    else if (dg_lists->parsed()) report = run_datagen_lists(dl);
    else if (sn_gen->parsed()) report = run_sortnet_gen(sg, out, wrote_stdout);
    else if (sn_verify->parsed()) report = run_sortnet_verify(sv);
    else if (comp->parsed()) report = run_compile(ca, out, wrote_stdout);
    else if (eval->parsed()) report = run_eval(ea, out, wrote_stdout);
    else if (est->parsed()) report = run_estimate(es, out, wrote_stdout);
    else if (loc->parsed()) report = run_locality(la, out, wrote_stdout);
    else if (tr_cls->parsed()) report = run_train_classify(tc);
    else if (tr_sort->parsed()) report = run_train_sort(ts);
    else if (co_enc->parsed()) report = run_codec_encode(co, out, wrote_stdout);
    else if (co_inj->parsed()) report = run_codec_injective(co);
    else if (pipe_run->parsed()) report = run_pipeline_cmd(pa);
    else {
      err << json{{"error", {{"kind", "unknown-command"}, {"message", "no command given"}}}}.dump() << "\n";
      return {2, std::nullopt};
    }
    const std::string text = json(report).dump(2) + "\n";
    if (!common.report_path.empty()) {
      write_text_file(common.report_path, text);
    } else if (wrote_stdout) {
      err << text;
    } else {
      out << text;
    }
  } catch (const Error& e) {
    err << json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}.dump() << "\n";
    return {1, std::nullopt};
  } catch (const std::exception& e) {
    err << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return {1, std::nullopt};
  }
  return {0, std::move(report)};
}

}  // namespace sortnetc::cli
