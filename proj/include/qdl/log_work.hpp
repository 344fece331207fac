#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <string>

namespace qdl {

/// A positive work or data quantity stored as log2 of its value. One unit is
/// one encryption (one oracle query). The default-constructed value is the
/// explicit zero-work sentinel, i.e. log2(0).
class LogWork {
 public:
  constexpr LogWork() = default;

  static constexpr LogWork zero() { return LogWork{}; }
  /// Throws Errc::invalid_argument for non-finite input.
  static LogWork bits(double log2_value);
  /// log2 of a non-negative count; 0 maps to the zero sentinel.
  static LogWork count(double value);

  bool is_zero() const { return zero_; }
  /// log2 value; throws for the zero sentinel.
  double bits() const;
  /// log2 value, with the zero sentinel mapped to -infinity.
  double bits_or_neg_inf() const;

  /// Multiply by 2^delta.
  LogWork shifted(double delta_bits) const;
  /// Product of two quantities (exponents add).
  friend LogWork operator*(LogWork a, LogWork b);

  friend bool operator==(const LogWork& a, const LogWork& b) = default;
  friend std::partial_ordering operator<=>(const LogWork& a, const LogWork& b);

  /// "2^58.17", or "0" for the sentinel.
  std::string to_string(int decimals = 2) const;

 private:
  constexpr LogWork(double v, bool zero) : value_(v), zero_(zero) {}

  double value_ = 0.0;
  bool zero_ = true;
};

/// log2(sum 2^t_i); the zero sentinel is the additive identity. Requires a
/// non-empty sequence.
LogWork log2_sum(std::span<const LogWork> terms);
LogWork log2_sum(std::initializer_list<LogWork> terms);

/// term * numerator / denominator.
LogWork log2_scaled(LogWork term, long long numerator, long long denominator);

enum class AdversaryModel { classical, q1, q2 };

const char* to_string(AdversaryModel model);
AdversaryModel parse_model(const std::string& text);

struct Verdict {
  LogWork attack_time;
  LogWork attack_data;
  LogWork generic_bound;
  bool broken = false;
  double margin_bits = 0.0;  // generic_bound - attack_time
};

/// Compares an attack against exhaustive key search: 2^k classically, 2^{k/2}
/// for any quantum adversary (Grover needs no superposition queries).
Verdict make_verdict(LogWork time, LogWork data, double key_bits,
                     AdversaryModel model);

}  // namespace qdl
