#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sortnetc/identity_rule.hpp"
#include "sortnetc/patchcodec.hpp"

namespace sortnetc {

struct DatasetConfig {
  std::size_t image_side = 32;  // N
  std::size_t patch_side = 4;   // n
  std::size_t min_patches = 3;
  std::size_t max_patches = 6;
  std::size_t sample_count = 1000;  // M
  std::uint64_t seed = 0;
  bool balanced = true;
  /// Rejected position draws tolerated per image before giving up.
  std::size_t max_attempts = 1000;

  /// Throws infeasible_config when the configuration cannot be generated.
  void validate() const;
};

struct PlacedPatch {
  std::size_t row = 0;
  std::size_t col = 0;
  Patch patch;
};

struct IdentityImage {
  std::size_t side = 0;
  std::vector<std::uint8_t> pixels;  // side x side, row-major, values 0/1
  std::vector<PlacedPatch> patches;
  ClassLabel label = ClassLabel::two;

  [[nodiscard]] std::uint8_t at(std::size_t row, std::size_t col) const noexcept {
    return pixels[row * side + col];
  }
};

/// Copies the n x n block at (row, col) out of the image pixels.
Patch extract_patch(const IdentityImage& image, std::size_t row, std::size_t col,
                    std::size_t patch_side);

struct DatasetManifest {
  DatasetConfig config;
  std::vector<IdentityImage> images;
};

/// Image `index` of the dataset; depends only on (config, index).
IdentityImage generate_identity_image(const DatasetConfig& config, std::size_t index);

DatasetManifest generate_identity_dataset(const DatasetConfig& config);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
std::string image_file_name(std::size_t index);

/// Writes img_NNNNNN.pgm files plus manifest.json into `dir`.
void write_dataset(const DatasetManifest& manifest, const std::filesystem::path& dir);

/// Reads a dataset written by write_dataset. Pixels come from the PGM files;
/// positions, patterns and labels from the manifest.
DatasetManifest read_dataset(const std::filesystem::path& dir);

inline constexpr std::size_t kListLength = 10;
inline constexpr std::size_t kListClassOneCount = 5;

struct NumberListSample {
  std::array<double, kListLength> values{};
  std::array<double, kListLength> sorted_view{};
  ClassLabel label = ClassLabel::two;
};

/// Largest count of exactly equal values.
std::size_t list_max_multiplicity(const std::array<double, kListLength>& values);

/// Balanced list dataset. Class one repeats a base value k in 5..10 times;
/// class two repeats one value m in 1..4 times; remaining values are
/// uniform in [0, 1). Sample i depends only on (seed, i).
std::vector<NumberListSample> generate_list_dataset(std::size_t count, std::uint64_t seed);

/// CSV with header v0..v9,label; label is 1 for class one, 0 for class two.
void write_list_csv(const std::vector<NumberListSample>& samples, bool sorted_output,
                    const std::filesystem::path& path);

}  // namespace sortnetc
