#include "qdl/log_work.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qdl/error.hpp"

namespace qdl {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::incomplete_params: return "incomplete-params";
    case Errc::characteristic_unusable: return "characteristic-unusable";
    case Errc::distinguisher_invalid: return "distinguisher-invalid";
    case Errc::invalid_bias: return "invalid-bias";
    case Errc::no_applicable_attack: return "no-applicable-attack";
    case Errc::impossible_characteristic: return "impossible-characteristic";
    case Errc::not_found: return "not-found";
    case Errc::attack_failed: return "attack-failed";
    case Errc::schema_violation: return "schema-violation";
    case Errc::infeasible: return "infeasible";
  }
  return "unknown";
}

LogWork LogWork::bits(double log2_value) {
  if (!std::isfinite(log2_value)) {
    throw Error(Errc::invalid_argument, "LogWork requires a finite exponent");
  }
  return LogWork(log2_value, false);
}

LogWork LogWork::count(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error(Errc::invalid_argument, "count must be finite and >= 0");
  }
  if (value == 0.0) return zero();
  return LogWork(std::log2(value), false);
}

double LogWork::bits() const {
  if (zero_) throw Error(Errc::invalid_argument, "zero work has no log2 value");
  return value_;
}

double LogWork::bits_or_neg_inf() const {
  return zero_ ? -std::numeric_limits<double>::infinity() : value_;
}

LogWork LogWork::shifted(double delta_bits) const {
  if (zero_) return *this;
  return bits(value_ + delta_bits);
}

LogWork operator*(LogWork a, LogWork b) {
  if (a.zero_ || b.zero_) return LogWork::zero();
  return LogWork::bits(a.value_ + b.value_);
}

std::partial_ordering operator<=>(const LogWork& a, const LogWork& b) {
  if (a.zero_ || b.zero_) {
    return static_cast<int>(!a.zero_) <=> static_cast<int>(!b.zero_);
  }
  return a.value_ <=> b.value_;
}

std::string LogWork::to_string(int decimals) const {
  if (zero_) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "2^%.*f", decimals, value_);
  return buf;
}

LogWork log2_sum(std::span<const LogWork> terms) {
  if (terms.empty()) {
    throw Error(Errc::invalid_argument, "log2_sum needs at least one term");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) top = std::max(top, t.bits_or_neg_inf());
  if (std::isinf(top)) return LogWork::zero();
  double acc = 0.0;
  for (const auto& t : terms) {
    if (!t.is_zero()) acc += std::exp2(t.bits() - top);
  }
  return LogWork::bits(top + std::log2(acc));
}

LogWork log2_sum(std::initializer_list<LogWork> terms) {
  return log2_sum(std::span<const LogWork>(terms.begin(), terms.size()));
}

LogWork log2_scaled(LogWork term, long long numerator, long long denominator) {
  if (denominator == 0) {
    throw Error(Errc::invalid_argument, "log2_scaled: zero denominator");
  }
  if (numerator <= 0 || denominator < 0) {
    throw Error(Errc::invalid_argument,
                "log2_scaled: numerator and denominator must be positive");
  }
  return term.shifted(std::log2(static_cast<double>(numerator)) -
                      std::log2(static_cast<double>(denominator)));
}

const char* to_string(AdversaryModel model) {
  switch (model) {
    case AdversaryModel::classical: return "classical";
    case AdversaryModel::q1: return "q1";
    case AdversaryModel::q2: return "q2";
  }
  return "unknown";
}

AdversaryModel parse_model(const std::string& text) {
  if (text == "classical" || text == "c") return AdversaryModel::classical;
  if (text == "q1") return AdversaryModel::q1;
  if (text == "q2") return AdversaryModel::q2;
  throw Error(Errc::invalid_argument, "unknown adversary model '" + text + "'");
}

Verdict make_verdict(LogWork time, LogWork data, double key_bits,
                     AdversaryModel model) {
  if (!(key_bits >= 1.0)) {
    throw Error(Errc::invalid_argument, "make_verdict: key size must be >= 1");
  }
  Verdict v;
  v.attack_time = time;
  v.attack_data = data;
  v.generic_bound = LogWork::bits(
      model == AdversaryModel::classical ? key_bits : key_bits / 2.0);
  v.broken = time < v.generic_bound;
  v.margin_bits = v.generic_bound.bits() - (time.is_zero() ? 0.0 : time.bits());
  return v;
}

}  // namespace qdl
