#include "sortnetc/identity_rule.hpp"

#include <map>
#include <string>

#include "sortnetc/error.hpp"

namespace sortnetc {

std::string_view to_string(ClassLabel label) noexcept {
  return label == ClassLabel::one ? "one" : "two";
}

ClassLabel label_from_string(std::string_view text) {
  if (text == "one") return ClassLabel::one;
  if (text == "two") return ClassLabel::two;
  throw Error(ErrorKind::parse_error, "unknown class label '" + std::string(text) + "'");
}

std::size_t max_multiplicity(std::span<const Patch> patterns) {
  // keyed on the raw pixel vector: bit-exact equality, no encoding involved
  std::map<std::vector<std::uint8_t>, std::size_t> counts;
  std::size_t best = 0;
  for (const Patch& p : patterns) best = std::max(best, ++counts[p.bits()]);
  return best;
}

ClassLabel oracle_classify(std::span<const Patch> patterns) {
  if (patterns.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "identity task needs at least 3 patches");
  }
  return label_for_multiplicity(max_multiplicity(patterns), patterns.size());
}

}  // namespace sortnetc
