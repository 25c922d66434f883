#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sortnetc {

/// n x n binary patch, row-major.
class Patch {
 public:
  Patch() = default;
  Patch(std::size_t side, std::vector<std::uint8_t> bits);

  /// Patch whose row-major pixel string, read as an n^2-bit binary number
  /// with the top-left pixel as the most significant bit, equals `pack`.
  static Patch from_pack(std::size_t side, std::uint64_t pack);

  /// Parses a grid of '0'/'1' characters, one row per line; other
  /// whitespace is ignored. Throws parse_error on ragged or non-square input.
  static Patch from_ascii(std::string_view text);
  [[nodiscard]] std::string to_ascii() const;

  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] std::size_t pixel_count() const noexcept { return bits_.size(); }
  [[nodiscard]] const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  [[nodiscard]] std::uint8_t at(std::size_t row, std::size_t col) const noexcept {
    return bits_[row * side_ + col];
  }
  /// Inverse of from_pack; requires side^2 <= 64.
  [[nodiscard]] std::uint64_t pack() const;

  friend bool operator==(const Patch&, const Patch&) = default;

 private:
  std::size_t side_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Either exact (unbounded fraction bits) or a mantissa budget in bits.
class PrecisionModel {
 public:
  static PrecisionModel exact() noexcept { return PrecisionModel{}; }
  static PrecisionModel mantissa(unsigned bits);

  [[nodiscard]] bool is_exact() const noexcept { return !bits_.has_value(); }
  [[nodiscard]] unsigned mantissa_bits() const noexcept { return bits_.value_or(0); }
  /// Fraction bits kept for an n^2-pixel patch.
  [[nodiscard]] std::size_t kept_bits(std::size_t pixels) const noexcept;
  [[nodiscard]] std::string name() const;

  friend bool operator==(const PrecisionModel&, const PrecisionModel&) = default;

 private:
  std::optional<unsigned> bits_;
};

/// Parses "exact" or a positive bit count such as "24" or "53".
PrecisionModel precision_from_string(std::string_view text);

/// Single-number code of a patch: sum_i b_i 2^-i over the first kept bits.
/// Stored as a most-significant-first bit string so equality and ordering
/// are exact; value() is a floating-point view.
class PatchCode {
 public:
  PatchCode(std::size_t side, PrecisionModel precision, std::vector<std::uint64_t> words);

  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] const PrecisionModel& precision() const noexcept { return precision_; }
  [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  /// Fraction bit i (1-based), i.e. the coefficient of 2^-i.
  [[nodiscard]] bool bit(std::size_t i) const noexcept;
  /// Nearest double; exact whenever the kept bits fit in 53 bits.
  [[nodiscard]] double value() const noexcept;

  friend bool operator==(const PatchCode& a, const PatchCode& b) noexcept {
    return a.side_ == b.side_ && a.words_ == b.words_;
  }
  friend std::strong_ordering operator<=>(const PatchCode& a, const PatchCode& b) noexcept {
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t side_;
  PrecisionModel precision_;
  std::vector<std::uint64_t> words_;
};

/// Kernel weights 2^-1 .. 2^-(n^2), row-major from the top-left pixel.
std::vector<double> kernel_weights(std::size_t side);

PatchCode encode(const Patch& patch, PrecisionModel precision);

struct DecodeResult {
  Patch patch;
  /// Set when bits were dropped by the mantissa budget; patch then has
  /// zeros in the dropped positions.
  bool lossy = false;
};

DecodeResult decode(const PatchCode& code);

struct InjectivityReport {
  bool injective = true;
  std::uint64_t patches_checked = 0;
  std::optional<std::pair<Patch, Patch>> collision;
};

inline constexpr std::size_t kInjectivityCapPixels = 25;

/// Exhaustive check over all 2^(n^2) patches; stops at the first collision.
/// Throws too_large when n^2 exceeds `cap_pixels`.
InjectivityReport check_injectivity(std::size_t side, PrecisionModel precision,
                                    std::size_t cap_pixels = kInjectivityCapPixels);

inline bool codes_injective(std::size_t side, PrecisionModel precision) {
  return check_injectivity(side, precision).injective;
}

}  // namespace sortnetc
