#include "sortnetc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sortnetc/error.hpp"
#include "sortnetc/parallel.hpp"
#include "sortnetc/pgm.hpp"
#include "sortnetc/rng.hpp"

namespace sortnetc {

namespace {

constexpr std::string_view kManifestFormat = "sortnetc-identity-v1";
constexpr std::uint8_t kOnPixel = 255;

std::size_t ceil_sqrt(std::size_t v) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= v) --r;
  return r;
}

Patch random_patch(Rng& rng, std::size_t side) {
  std::vector<std::uint8_t> bits(side * side);
  for (auto& b : bits) b = rng.bit() ? 1 : 0;
  return Patch(side, std::move(bits));
}

bool overlaps(const PlacedPatch& a, std::size_t row, std::size_t col, std::size_t n) {
  return a.row < row + n && row < a.row + n && a.col < col + n && col < a.col + n;
}

std::string bits_string(const Patch& p) {
  std::string s;
  s.reserve(p.pixel_count());
  for (std::uint8_t b : p.bits()) s.push_back(b ? '1' : '0');
  return s;
}

Patch patch_from_bits_string(std::size_t side, const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw Error(ErrorKind::parse_error, "patch bits must be 0/1");
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Patch(side, std::move(bits));
}

}  // namespace

void DatasetConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::infeasible_config, why); };
  if (patch_side < 1) fail("patch side must be >= 1");
  if (image_side < patch_side) fail("image side must be >= patch side");
  if (min_patches < 3) fail("min_patches must be >= 3");
  if (max_patches < min_patches) fail("max_patches must be >= min_patches");
  if (sample_count < 1) fail("sample count must be >= 1");
  if (patch_side * ceil_sqrt(max_patches) > image_side) {
    fail("cannot guarantee room for " + std::to_string(max_patches) + " patches of side " +
         std::to_string(patch_side) + " in a " + std::to_string(image_side) + " image");
  }
  const std::size_t pixels = patch_side * patch_side;
  if (pixels < 63 && (std::uint64_t{1} << pixels) < max_patches) {
    fail("only " + std::to_string(std::uint64_t{1} << pixels) +
         " distinct patterns exist; class two needs " + std::to_string(max_patches));
  }
}

Patch extract_patch(const IdentityImage& image, std::size_t row, std::size_t col,
                    std::size_t patch_side) {
  if (row + patch_side > image.side || col + patch_side > image.side) {
    throw Error(ErrorKind::position_out_of_bounds,
                "patch at (" + std::to_string(row) + "," + std::to_string(col) + ") leaves the " +
                    std::to_string(image.side) + "x" + std::to_string(image.side) + " image");
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(patch_side * patch_side);
  for (std::size_t r = 0; r < patch_side; ++r) {
    for (std::size_t c = 0; c < patch_side; ++c) bits.push_back(image.at(row + r, col + c));
  }
  return Patch(patch_side, std::move(bits));
}

IdentityImage generate_identity_image(const DatasetConfig& config, std::size_t index) {
  Rng rng(config.seed, index);
  const std::size_t n = config.patch_side;
  const auto count = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(config.min_patches), static_cast<std::int64_t>(config.max_patches)));

  IdentityImage img;
  img.side = config.image_side;
  if (config.balanced) {
    img.label = index % 2 == 0 ? ClassLabel::one : ClassLabel::two;
  } else {
    img.label = rng.bit() ? ClassLabel::one : ClassLabel::two;
  }

  std::vector<Patch> patterns;
  patterns.reserve(count);
  if (img.label == ClassLabel::one) {
    const auto repeats = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(class_one_threshold(count)),
                        static_cast<std::int64_t>(count)));
    const Patch base = random_patch(rng, n);
    patterns.assign(repeats, base);
    while (patterns.size() < count) patterns.push_back(random_patch(rng, n));
    rng.shuffle(patterns);
  } else {
    // pairwise distinct, resampled on collision
    while (patterns.size() < count) {
      Patch p = random_patch(rng, n);
      if (std::find(patterns.begin(), patterns.end(), p) == patterns.end()) {
        patterns.push_back(std::move(p));
      }
    }
  }
  if (oracle_classify(patterns) != img.label) {
    throw Error(ErrorKind::invalid_argument, "generated patterns disagree with intended label");
  }

  const std::size_t span = config.image_side - n + 1;
  std::size_t rejected = 0;
  for (Patch& p : patterns) {
    for (;;) {
      const auto row = static_cast<std::size_t>(rng.uniform_below(span));
      const auto col = static_cast<std::size_t>(rng.uniform_below(span));
      const bool clash = std::any_of(img.patches.begin(), img.patches.end(),
                                     [&](const PlacedPatch& q) { return overlaps(q, row, col, n); });
      if (!clash) {
        img.patches.push_back({row, col, std::move(p)});
        break;
      }
      if (++rejected > config.max_attempts) {
        throw Error(ErrorKind::placement_failure,
                    "image " + std::to_string(index) + ": no free position after " +
                        std::to_string(config.max_attempts) + " rejected draws");
      }
    }
  }

  img.pixels.assign(img.side * img.side, 0);
  for (const PlacedPatch& pp : img.patches) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        img.pixels[(pp.row + r) * img.side + pp.col + c] = pp.patch.at(r, c);
      }
    }
  }
  return img;
}

DatasetManifest generate_identity_dataset(const DatasetConfig& config) {
  config.validate();
  DatasetManifest manifest;
  manifest.config = config;
  manifest.images.resize(config.sample_count);
  parallel_for(config.sample_count, [&](std::size_t i) {
    manifest.images[i] = generate_identity_image(config, i);
  });
  return manifest;
}

std::string image_file_name(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "img_" + digits + ".pgm";
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  const DatasetConfig& c = manifest.config;
  nlohmann::json images = nlohmann::json::array();
  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    const IdentityImage& img = manifest.images[i];
    nlohmann::json patches = nlohmann::json::array();
    for (const PlacedPatch& p : img.patches) {
      patches.push_back({{"row", p.row}, {"col", p.col}, {"bits", bits_string(p.patch)}});
    }
    images.push_back({{"file", image_file_name(i)},
                      {"label", to_string(img.label)},
                      {"patch_count", img.patches.size()},
                      {"patches", std::move(patches)}});
  }
  return {{"format", kManifestFormat},
          {"rng", kRngName},
          {"config",
           {{"image_side", c.image_side},
            {"patch_side", c.patch_side},
            {"min_patches", c.min_patches},
            {"max_patches", c.max_patches},
            {"sample_count", c.sample_count},
            {"seed", c.seed},
            {"balanced", c.balanced},
            {"max_attempts", c.max_attempts}}},
          {"images", std::move(images)}};
}

void write_dataset(const DatasetManifest& manifest, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::file_io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    const IdentityImage& img = manifest.images[i];
    GrayImage gray{img.side, img.side, 255, {}};
    gray.data.resize(img.pixels.size());
    std::transform(img.pixels.begin(), img.pixels.end(), gray.data.begin(),
                   [](std::uint8_t b) { return b ? kOnPixel : std::uint8_t{0}; });
    write_pgm(gray, dir / image_file_name(i));
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error(ErrorKind::file_io, "cannot write manifest in " + dir.string());
  out << manifest_to_json(manifest).dump(2) << '\n';
}

DatasetManifest read_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw Error(ErrorKind::file_io, "no manifest.json in " + dir.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("manifest: ") + e.what());
  }
  DatasetManifest m;
  try {
    if (j.at("format").get<std::string>() != kManifestFormat) {
      throw Error(ErrorKind::parse_error, "unsupported manifest format");
    }
    const auto& jc = j.at("config");
    m.config.image_side = jc.at("image_side").get<std::size_t>();
    m.config.patch_side = jc.at("patch_side").get<std::size_t>();
    m.config.min_patches = jc.at("min_patches").get<std::size_t>();
    m.config.max_patches = jc.at("max_patches").get<std::size_t>();
    m.config.sample_count = jc.at("sample_count").get<std::size_t>();
    m.config.seed = jc.at("seed").get<std::uint64_t>();
    m.config.balanced = jc.at("balanced").get<bool>();
    m.config.max_attempts = jc.value("max_attempts", std::size_t{1000});
    for (const auto& ji : j.at("images")) {
      IdentityImage img;
      const GrayImage gray = read_pgm(dir / ji.at("file").get<std::string>());
      if (gray.width != m.config.image_side || gray.height != m.config.image_side) {
        throw Error(ErrorKind::parse_error, "image size does not match manifest");
      }
      img.side = gray.width;
      img.pixels.resize(gray.data.size());
      for (std::size_t k = 0; k < gray.data.size(); ++k) {
        const std::uint8_t v = gray.data[k];
        if (v != 0 && v != gray.maxval) throw Error(ErrorKind::parse_error, "non-binary pixel");
        img.pixels[k] = v ? 1 : 0;
      }
      img.label = label_from_string(ji.at("label").get<std::string>());
      for (const auto& jp : ji.at("patches")) {
        img.patches.push_back({jp.at("row").get<std::size_t>(), jp.at("col").get<std::size_t>(),
                               patch_from_bits_string(m.config.patch_side,
                                                      jp.at("bits").get<std::string>())});
      }
      m.images.push_back(std::move(img));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("manifest: ") + e.what());
  }
  return m;
}

std::size_t list_max_multiplicity(const std::array<double, kListLength>& values) {
  std::map<double, std::size_t> counts;
  std::size_t best = 0;
  for (double v : values) best = std::max(best, ++counts[v]);
  return best;
}

std::vector<NumberListSample> generate_list_dataset(std::size_t count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "list dataset needs count >= 1");
  std::vector<NumberListSample> samples(count);
  parallel_for(count, [&](std::size_t i) {
    Rng rng(seed, i);
    NumberListSample& s = samples[i];
    s.label = i % 2 == 0 ? ClassLabel::one : ClassLabel::two;
    for (;;) {
      const std::int64_t repeats = s.label == ClassLabel::one ? rng.uniform_int(5, 10)
                                                              : rng.uniform_int(1, 4);
      std::vector<double> values(static_cast<std::size_t>(repeats), rng.uniform01());
      while (values.size() < kListLength) values.push_back(rng.uniform01());
      rng.shuffle(values);
      std::copy(values.begin(), values.end(), s.values.begin());
      const bool class_one = list_max_multiplicity(s.values) >= kListClassOneCount;
      if (class_one == (s.label == ClassLabel::one)) break;
    }
    s.sorted_view = s.values;
    std::sort(s.sorted_view.begin(), s.sorted_view.end());
  });
  return samples;
}

void write_list_csv(const std::vector<NumberListSample>& samples, bool sorted_output,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::file_io, "cannot open " + path.string() + " for writing");
  for (std::size_t k = 0; k < kListLength; ++k) out << 'v' << k << ',';
  out << "label\n";
  char buf[32];
  for (const NumberListSample& s : samples) {
    const auto& view = sorted_output ? s.sorted_view : s.values;
    for (double v : view) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << (s.label == ClassLabel::one ? 1 : 0) << '\n';
  }
  if (!out) throw Error(ErrorKind::file_io, "failed writing " + path.string());
}

}  // namespace sortnetc
