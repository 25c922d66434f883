#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "sortnetc/patchcodec.hpp"

namespace sortnetc {

enum class ClassLabel { one, two };

std::string_view to_string(ClassLabel label) noexcept;
ClassLabel label_from_string(std::string_view text);

/// Smallest multiplicity that makes an image of c patches class one:
/// "at least half", i.e. ceil(c / 2).
constexpr std::size_t class_one_threshold(std::size_t patch_count) noexcept {
  return (patch_count + 1) / 2;
}

constexpr ClassLabel label_for_multiplicity(std::size_t max_multiplicity,
                                            std::size_t patch_count) noexcept {
  return max_multiplicity >= class_one_threshold(patch_count) ? ClassLabel::one : ClassLabel::two;
}

/// Largest number of bit-identical patterns in the list.
std::size_t max_multiplicity(std::span<const Patch> patterns);

/// Ground-truth class by exact multiset counting. Requires at least 3 patterns.
ClassLabel oracle_classify(std::span<const Patch> patterns);

}  // namespace sortnetc
