#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sortnetc {

using BigInt = boost::multiprecision::cpp_int;

/// One level of the preprocessor hierarchy. Level 0 is the encoder output.
struct LocalityLevel {
  std::size_t level = 0;
  double log2_cardinality = 0.0;    // L_i = log2 |S_i|
  double compression_factor = 0.0;  // C_i = 2 L_{i-1} / L_i; NaN at level 0
  double receptive_field_size = 1.0;  // 2^i
};

struct LocalityTrace {
  double initial_bits = 0.0;
  std::vector<LocalityLevel> levels;
  /// C_last - 1 at the last computed level; no extrapolation.
  double locality_estimate = 0.0;
  /// 1 / (2 L_{last-1} - 1), the leading-order size of C_last - 1.
  double analytic_bound = 0.0;
};

/// Identity-task hierarchy for n x n binary patches: |S_0| = 2^(n^2) and
/// |S_i| = s^2 - C(s, 2) = s (s + 1) / 2 with s = |S_{i-1}|. Computed in
/// log2 space, since |S_i| grows doubly exponentially.
LocalityTrace trace_identity_locality(std::size_t patch_side, std::size_t levels);

/// Same recurrence from an arbitrary starting information content L_0 bits.
/// Throws invalid_argument for L_0 <= 0 (a single-symbol alphabet).
LocalityTrace trace_locality_from_bits(double initial_bits, std::size_t levels);

/// s^2 - C(s, 2), computed literally.
BigInt unordered_pair_symbols(const BigInt& s);

/// log2 of a positive big integer, valid far beyond the double range.
double log2_big(const BigInt& v);

struct ExactLevel {
  std::size_t level = 0;
  BigInt cardinality;      // |S_i| by exact arithmetic
  double exact_log2 = 0.0; // log2 of cardinality
  double traced_log2 = 0.0;
  double abs_error = 0.0;
};

/// Exact |S_i| for every level whose cardinality stays below 2^max_bits,
/// compared with the log-space trace.
std::vector<ExactLevel> exact_levels(std::size_t patch_side, std::size_t max_bits = 64);

struct AsymptoticRow {
  std::size_t level = 0;
  double traced = 0.0;      // C_i
  double asymptotic = 0.0;  // 2L / (2L - 1), L = L_{i-1}
  double abs_diff = 0.0;
};

struct RatioRow {
  std::size_t level = 0;
  BigInt s;      // |S_{i-1}|
  double ratio;  // (s + 1) / (2s + 1)
};

struct ClosedFormReport {
  std::vector<AsymptoticRow> asymptotic;
  std::vector<RatioRow> ratios;
  bool differences_shrink = false;  // |C_i - 2L/(2L-1)| non-increasing and tiny at the end
  bool ratio_tends_to_half = false;
  double limit_locality = 0.0;      // 2 * 1/2 - 1
};

/// Compares the traced compression factors with 2L/(2L-1) and evaluates
/// (s+1)/(2s+1) exactly on the levels where s fits in 64 bits.
ClosedFormReport locality_closed_form_check(std::size_t levels, std::size_t patch_side = 1);

}  // namespace sortnetc
