#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sortnetc/datagen.hpp"
#include "sortnetc/identity_rule.hpp"
#include "sortnetc/nnruntime.hpp"
#include "sortnetc/patchcodec.hpp"

namespace sortnetc {

struct PipelineVerdict {
  ClassLabel predicted_class = ClassLabel::two;
  std::vector<double> sorted_codes;  // the c real codes, ascending
  std::size_t max_run_length = 0;
  std::size_t patch_count = 0;
};

struct PatchPosition {
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Attention-mode identity classifier: encode each attended patch into one
/// real code, sort the codes with a compiled ReLU sorting network, and scan
/// neighbours for exact equality.
///
/// The sorter is compiled once for `capacity` inputs. Unused slots are fed
/// code 0 and tracked by count; since no code is below 0 they occupy the
/// first outputs and are skipped, even when real all-zero patches also
/// encode to 0.
class IdentityClassifier {
 public:
  /// Throws precision_insufficient when n^2 codes cannot pass through the
  /// binary64 sorter exactly (more than 53 bits, or more than the mantissa).
  IdentityClassifier(std::size_t capacity, std::size_t patch_side, PrecisionModel precision);

  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
  [[nodiscard]] const DenseNetwork& sorter() const noexcept { return sorter_; }

  [[nodiscard]] PipelineVerdict classify(const IdentityImage& image,
                                         std::span<const PatchPosition> positions) const;

  /// Uses the positions stored with the image (ground-truth attention).
  [[nodiscard]] PipelineVerdict classify(const IdentityImage& image) const;

  /// Sort-and-scan on already encoded codes.
  [[nodiscard]] PipelineVerdict classify_codes(std::span<const double> codes) const;

 private:
  std::size_t capacity_;
  std::size_t patch_side_;
  PrecisionModel precision_;
  DenseNetwork sorter_;
};

/// One-shot classification with a sorter sized for `capacity` patches.
PipelineVerdict classify_image(const IdentityImage& image, std::size_t patch_side,
                               PrecisionModel precision, std::size_t capacity);

struct PipelineSummary {
  std::size_t images = 0;
  std::size_t agree_with_oracle = 0;
  std::size_t agree_with_stored = 0;
  std::size_t stored_matches_oracle = 0;
  std::vector<PipelineVerdict> verdicts;
  std::vector<ClassLabel> oracle_labels;
};

/// Classifies every image of a dataset; the oracle label is recomputed from
/// the pixel data at the stored positions.
PipelineSummary run_pipeline(const DatasetManifest& dataset, PrecisionModel precision);

}  // namespace sortnetc
