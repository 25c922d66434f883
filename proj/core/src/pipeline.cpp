#include "sortnetc/pipeline.hpp"

#include <string>

#include "sortnetc/error.hpp"
#include "sortnetc/nncompiler.hpp"
#include "sortnetc/parallel.hpp"
#include "sortnetc/sortnet.hpp"

namespace sortnetc {

namespace {

constexpr std::size_t kBinary64Mantissa = 53;

SortingNetwork sorter_for(std::size_t capacity) {
  return capacity <= 4 ? make_optimal_small(capacity) : make_merge_network(capacity);
}

}  // namespace

IdentityClassifier::IdentityClassifier(std::size_t capacity, std::size_t patch_side,
                                       PrecisionModel precision)
    : capacity_(capacity), patch_side_(patch_side), precision_(precision) {
  if (capacity_ < 3) throw Error(ErrorKind::invalid_argument, "capacity must be >= 3 patches");
  const std::size_t pixels = patch_side_ * patch_side_;
  if (!precision_.is_exact() && pixels > precision_.mantissa_bits()) {
    throw Error(ErrorKind::precision_insufficient,
                std::to_string(pixels) + "-bit patches do not fit a " +
                    std::to_string(precision_.mantissa_bits()) + "-bit mantissa");
  }
  if (pixels > kBinary64Mantissa) {
    throw Error(ErrorKind::precision_insufficient,
                std::to_string(pixels) + "-bit codes exceed the 53-bit binary64 sorter");
  }
  sorter_ = compile(sorter_for(capacity_), false);
}

PipelineVerdict IdentityClassifier::classify_codes(std::span<const double> codes) const {
  if (codes.size() > capacity_) {
    throw Error(ErrorKind::dimension_mismatch, std::to_string(codes.size()) +
                                                   " patches exceed sorter capacity " +
                                                   std::to_string(capacity_));
  }
  if (codes.size() < 3) throw Error(ErrorKind::invalid_argument, "identity task needs at least 3 patches");
  std::vector<double> input(capacity_, 0.0);
  std::copy(codes.begin(), codes.end(), input.begin());
  const std::vector<double> sorted = sorter_.forward(input);

  PipelineVerdict v;
  v.patch_count = codes.size();
  const std::size_t padding = capacity_ - codes.size();
  v.sorted_codes.assign(sorted.begin() + static_cast<std::ptrdiff_t>(padding), sorted.end());
  std::size_t run = 0;
  for (std::size_t i = 0; i < v.sorted_codes.size(); ++i) {
    run = (i > 0 && v.sorted_codes[i] == v.sorted_codes[i - 1]) ? run + 1 : 1;
    v.max_run_length = std::max(v.max_run_length, run);
  }
  v.predicted_class = label_for_multiplicity(v.max_run_length, v.patch_count);
  return v;
}

PipelineVerdict IdentityClassifier::classify(const IdentityImage& image,
                                             std::span<const PatchPosition> positions) const {
  std::vector<double> codes;
  codes.reserve(positions.size());
  for (const PatchPosition& p : positions) {
    codes.push_back(encode(extract_patch(image, p.row, p.col, patch_side_), precision_).value());
  }
  return classify_codes(codes);
}

PipelineVerdict IdentityClassifier::classify(const IdentityImage& image) const {
  std::vector<PatchPosition> positions;
  positions.reserve(image.patches.size());
  for (const PlacedPatch& p : image.patches) positions.push_back({p.row, p.col});
  return classify(image, positions);
}

PipelineVerdict classify_image(const IdentityImage& image, std::size_t patch_side,
                               PrecisionModel precision, std::size_t capacity) {
  return IdentityClassifier(capacity, patch_side, precision).classify(image);
}

PipelineSummary run_pipeline(const DatasetManifest& dataset, PrecisionModel precision) {
  const DatasetConfig& cfg = dataset.config;
  const IdentityClassifier classifier(cfg.max_patches, cfg.patch_side, precision);
  PipelineSummary s;
  s.images = dataset.images.size();
  s.verdicts.resize(s.images);
  s.oracle_labels.resize(s.images);
  parallel_for(s.images, [&](std::size_t i) {
    const IdentityImage& img = dataset.images[i];
    s.verdicts[i] = classifier.classify(img);
    std::vector<Patch> extracted;
    for (const PlacedPatch& p : img.patches) {
      extracted.push_back(extract_patch(img, p.row, p.col, cfg.patch_side));
    }
    s.oracle_labels[i] = oracle_classify(extracted);
  });
  for (std::size_t i = 0; i < s.images; ++i) {
    const ClassLabel stored = dataset.images[i].label;
    s.agree_with_oracle += s.verdicts[i].predicted_class == s.oracle_labels[i] ? 1 : 0;
    s.agree_with_stored += s.verdicts[i].predicted_class == stored ? 1 : 0;
    s.stored_matches_oracle += stored == s.oracle_labels[i] ? 1 : 0;
  }
  return s;
}

}  // namespace sortnetc
