#include "sortnetc/patchcodec.hpp"

#include <algorithm>
#include <cmath>

#include "sortnetc/error.hpp"

namespace sortnetc {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Fraction bit i (1-based) lives in word (i-1)/64 at position 63 - (i-1)%64.
void set_fraction_bit(std::vector<std::uint64_t>& words, std::size_t i) {
  const std::size_t k = i - 1;
  words[k / kWordBits] |= std::uint64_t{1} << (kWordBits - 1 - k % kWordBits);
}

}  // namespace

Patch::Patch(std::size_t side, std::vector<std::uint8_t> bits) : side_(side), bits_(std::move(bits)) {
  if (side_ == 0) throw Error(ErrorKind::invalid_argument, "patch side must be >= 1");
  if (bits_.size() != side_ * side_) {
    throw Error(ErrorKind::dimension_mismatch, "patch of side " + std::to_string(side_) + " needs " +
                                                   std::to_string(side_ * side_) + " pixels");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(ErrorKind::invalid_argument, "patch pixels must be 0 or 1");
  }
}

Patch Patch::from_pack(std::size_t side, std::uint64_t pack) {
  const std::size_t pixels = side * side;
  if (pixels > 64) throw Error(ErrorKind::too_large, "pack form needs side^2 <= 64");
  std::vector<std::uint8_t> bits(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    bits[i] = static_cast<std::uint8_t>((pack >> (pixels - 1 - i)) & 1U);
  }
  return Patch(side, std::move(bits));
}

std::uint64_t Patch::pack() const {
  if (bits_.size() > 64) throw Error(ErrorKind::too_large, "pack form needs side^2 <= 64");
  std::uint64_t p = 0;
  for (std::uint8_t b : bits_) p = (p << 1) | b;
  return p;
}

Patch Patch::from_ascii(std::string_view text) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<std::uint8_t> current;
  auto flush = [&] {
    if (!current.empty()) rows.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      current.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (ch == '\n') {
      flush();
    } else if (ch != ' ' && ch != '\t' && ch != '\r') {
      throw Error(ErrorKind::parse_error, std::string("unexpected character '") + ch + "' in patch");
    }
  }
  flush();
  if (rows.empty()) throw Error(ErrorKind::parse_error, "empty patch");
  const std::size_t side = rows.size();
  std::vector<std::uint8_t> bits;
  for (const auto& r : rows) {
    if (r.size() != side) throw Error(ErrorKind::parse_error, "patch grid must be square");
    bits.insert(bits.end(), r.begin(), r.end());
  }
  return Patch(side, std::move(bits));
}

std::string Patch::to_ascii() const {
  std::string out;
  out.reserve(side_ * (side_ + 1));
  for (std::size_t r = 0; r < side_; ++r) {
    for (std::size_t c = 0; c < side_; ++c) out.push_back(at(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

PrecisionModel PrecisionModel::mantissa(unsigned bits) {
  if (bits == 0) throw Error(ErrorKind::invalid_argument, "mantissa needs at least one bit");
  PrecisionModel p;
  p.bits_ = bits;
  return p;
}

std::size_t PrecisionModel::kept_bits(std::size_t pixels) const noexcept {
  return bits_ ? std::min<std::size_t>(pixels, *bits_) : pixels;
}

std::string PrecisionModel::name() const { return bits_ ? std::to_string(*bits_) : "exact"; }

PrecisionModel precision_from_string(std::string_view text) {
  if (text == "exact") return PrecisionModel::exact();
  unsigned v = 0;
  if (text.empty()) throw Error(ErrorKind::parse_error, "empty precision");
  for (char ch : text) {
    if (ch < '0' || ch > '9' || v > 100000) {
      throw Error(ErrorKind::parse_error, "precision must be 'exact' or a bit count");
    }
    v = v * 10 + static_cast<unsigned>(ch - '0');
  }
  return PrecisionModel::mantissa(v);
}

PatchCode::PatchCode(std::size_t side, PrecisionModel precision, std::vector<std::uint64_t> words)
    : side_(side), precision_(precision), words_(std::move(words)) {
  if (words_.size() != word_count(side_ * side_)) {
    throw Error(ErrorKind::dimension_mismatch, "code word count does not match patch side");
  }
}

bool PatchCode::bit(std::size_t i) const noexcept {
  const std::size_t k = i - 1;
  return ((words_[k / kWordBits] >> (kWordBits - 1 - k % kWordBits)) & 1U) != 0;
}

double PatchCode::value() const noexcept {
  // least significant first, so every partial sum is exact while it fits
  double v = 0.0;
  for (std::size_t i = side_ * side_; i >= 1; --i) {
    if (bit(i)) v += std::ldexp(1.0, -static_cast<int>(i));
  }
  return v;
}

std::vector<double> kernel_weights(std::size_t side) {
  std::vector<double> w(side * side);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::ldexp(1.0, -static_cast<int>(i + 1));
  return w;
}

PatchCode encode(const Patch& patch, PrecisionModel precision) {
  const std::size_t pixels = patch.pixel_count();
  const std::size_t kept = precision.kept_bits(pixels);
  std::vector<std::uint64_t> words(word_count(pixels), 0);
  for (std::size_t i = 1; i <= kept; ++i) {
    if (patch.bits()[i - 1]) set_fraction_bit(words, i);
  }
  return PatchCode(patch.side(), precision, std::move(words));
}

DecodeResult decode(const PatchCode& code) {
  const std::size_t pixels = code.side() * code.side();
  std::vector<std::uint8_t> bits(pixels);
  for (std::size_t i = 1; i <= pixels; ++i) bits[i - 1] = code.bit(i) ? 1 : 0;
  DecodeResult r{Patch(code.side(), std::move(bits)), false};
  r.lossy = code.precision().kept_bits(pixels) < pixels;
  return r;
}

InjectivityReport check_injectivity(std::size_t side, PrecisionModel precision,
                                    std::size_t cap_pixels) {
  const std::size_t pixels = side * side;
  if (side == 0) throw Error(ErrorKind::invalid_argument, "patch side must be >= 1");
  if (pixels > cap_pixels || pixels > 32) {
    throw Error(ErrorKind::too_large, "exhaustive injectivity check limited to " +
                                          std::to_string(cap_pixels) + " pixels, got " +
                                          std::to_string(pixels));
  }
  const std::size_t kept = precision.kept_bits(pixels);
  const std::uint64_t total = std::uint64_t{1} << pixels;
  auto key_of = [&](const PatchCode& c) { return c.words()[0] >> (kWordBits - kept); };

  std::vector<bool> seen(std::size_t{1} << kept, false);
  InjectivityReport report;
  for (std::uint64_t p = 0; p < total; ++p) {
    const Patch patch = Patch::from_pack(side, p);
    const std::uint64_t key = key_of(encode(patch, precision));
    ++report.patches_checked;
    if (seen[key]) {
      report.injective = false;
      for (std::uint64_t q = 0; q < p; ++q) {
        Patch earlier = Patch::from_pack(side, q);
        if (key_of(encode(earlier, precision)) == key) {
          report.collision.emplace(std::move(earlier), patch);
          break;
        }
      }
      return report;
    }
    seen[key] = true;
  }
  return report;
}

}  // namespace sortnetc
