#include "sortnetc/locality.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sortnetc/error.hpp"

namespace sortnetc {

namespace {

// log2(1 + 2^-bits) without cancellation
double log2_one_plus_pow2_neg(double bits) {
  return std::log1p(std::exp2(-bits)) / std::numbers::ln2;
}

}  // namespace

LocalityTrace trace_locality_from_bits(double initial_bits, std::size_t levels) {
  if (!(initial_bits > 0.0)) {
    throw Error(ErrorKind::invalid_argument,
                "a single-symbol alphabet (0 bits) has no defined compression factor");
  }
  if (levels < 1) throw Error(ErrorKind::invalid_argument, "need at least one level");

  LocalityTrace t;
  t.initial_bits = initial_bits;
  t.levels.push_back({0, initial_bits, std::numeric_limits<double>::quiet_NaN(), 1.0});
  for (std::size_t i = 1; i <= levels; ++i) {
    const double prev = t.levels.back().log2_cardinality;
    // log2(s (s+1) / 2) = L + log2(s+1) - 1, log2(s+1) = L + log2(1 + 2^-L)
    const double log2_s_plus_1 = prev + log2_one_plus_pow2_neg(prev);
    const double cur = prev + log2_s_plus_1 - 1.0;
    t.levels.push_back({i, cur, 2.0 * prev / cur, std::ldexp(1.0, static_cast<int>(i))});
  }
  const LocalityLevel& last = t.levels.back();
  const double before_last = t.levels[t.levels.size() - 2].log2_cardinality;
  t.locality_estimate = last.compression_factor - 1.0;
  t.analytic_bound = 1.0 / (2.0 * before_last - 1.0);
  return t;
}

LocalityTrace trace_identity_locality(std::size_t patch_side, std::size_t levels) {
  if (patch_side < 1) throw Error(ErrorKind::invalid_argument, "patch side must be >= 1");
  return trace_locality_from_bits(static_cast<double>(patch_side * patch_side), levels);
}

BigInt unordered_pair_symbols(const BigInt& s) {
  const BigInt choose2 = s * (s - 1) / 2;
  return s * s - choose2;
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw Error(ErrorKind::invalid_argument, "log2 of a non-positive integer");
  const auto msb = static_cast<std::size_t>(boost::multiprecision::msb(v));
  if (msb < 1000) return std::log2(v.convert_to<double>());
  // keep the top 64 bits; the rest cannot move a double
  const std::size_t shift = msb - 63;
  const BigInt top = v >> shift;
  return static_cast<double>(shift) + std::log2(top.convert_to<double>());
}

std::vector<ExactLevel> exact_levels(std::size_t patch_side, std::size_t max_bits) {
  const std::size_t pixels = patch_side * patch_side;
  const BigInt limit = BigInt(1) << max_bits;
  std::vector<ExactLevel> out;
  BigInt s = BigInt(1) << pixels;
  std::size_t level = 0;
  // enough levels for the trace to cover every exact one
  const LocalityTrace trace = trace_identity_locality(patch_side, 2 + max_bits);
  while (s < limit && level < trace.levels.size()) {
    ExactLevel e;
    e.level = level;
    e.cardinality = s;
    e.exact_log2 = log2_big(s);
    e.traced_log2 = trace.levels[level].log2_cardinality;
    e.abs_error = std::abs(e.exact_log2 - e.traced_log2);
    out.push_back(std::move(e));
    s = unordered_pair_symbols(s);
    ++level;
  }
  return out;
}

ClosedFormReport locality_closed_form_check(std::size_t levels, std::size_t patch_side) {
  if (levels < 2) throw Error(ErrorKind::invalid_argument, "closed-form check needs >= 2 levels");
  const LocalityTrace trace = trace_identity_locality(patch_side, levels);
  ClosedFormReport r;
  for (std::size_t i = 1; i < trace.levels.size(); ++i) {
    const double prev = trace.levels[i - 1].log2_cardinality;
    AsymptoticRow row;
    row.level = i;
    row.traced = trace.levels[i].compression_factor;
    row.asymptotic = 2.0 * prev / (2.0 * prev - 1.0);
    row.abs_diff = std::abs(row.traced - row.asymptotic);
    r.asymptotic.push_back(row);
  }
  r.differences_shrink = true;
  for (std::size_t i = 1; i < r.asymptotic.size(); ++i) {
    // allow rounding noise once both sit at the double floor
    if (r.asymptotic[i].abs_diff > r.asymptotic[i - 1].abs_diff + 1e-15) r.differences_shrink = false;
  }
  r.differences_shrink = r.differences_shrink && r.asymptotic.back().abs_diff < 1e-9;

  for (const ExactLevel& e : exact_levels(patch_side, 64)) {
    const BigInt& s = e.cardinality;
    // ratio of two integers below 2^65, rounded once
    const double ratio = static_cast<double>(
        boost::multiprecision::cpp_bin_float_double(BigInt(s + 1)) /
        boost::multiprecision::cpp_bin_float_double(BigInt(2 * s + 1)));
    r.ratios.push_back({e.level + 1, s, ratio});
  }
  r.ratio_tends_to_half = !r.ratios.empty();
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    if (r.ratios[i].ratio < 0.5) r.ratio_tends_to_half = false;
    if (i > 0 && r.ratios[i].ratio > r.ratios[i - 1].ratio) r.ratio_tends_to_half = false;
  }
  r.limit_locality = 2.0 * 0.5 - 1.0;
  return r;
}

}  // namespace sortnetc
