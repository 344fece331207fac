#include "qdl/params.hpp"

#include <cmath>

#include "qdl/error.hpp"

namespace qdl {

const char* to_string(Q2TruncatedBranch branch) {
  switch (branch) {
    case Q2TruncatedBranch::automatic: return "auto";
    case Q2TruncatedBranch::structured: return "structured";
    case Q2TruncatedBranch::degenerate: return "degenerate";
    case Q2TruncatedBranch::filtered_pairs: return "filtered-pairs";
  }
  return "auto";
}

Q2TruncatedBranch parse_q2_branch(const std::string& text) {
  if (text == "auto") return Q2TruncatedBranch::automatic;
  if (text == "structured") return Q2TruncatedBranch::structured;
  if (text == "degenerate") return Q2TruncatedBranch::degenerate;
  if (text == "filtered-pairs") return Q2TruncatedBranch::filtered_pairs;
  throw Error(Errc::invalid_argument, "unknown q2 branch '" + text + "'");
}

const std::vector<std::string_view>& param_field_names() {
  static const std::vector<std::string_view> names = {
      "n",         "k",         "h_S",   "h_T",         "h_T_path",
      "Delta_in",  "Delta_out", "Delta_fin", "h_out",   "k_out",
      "log2_C_kout", "epsilon_log2", "ell"};
  return names;
}

const std::optional<double>* AttackParams::slot(std::string_view f) const {
  if (f == "n") return &n;
  if (f == "k") return &k;
  if (f == "h_S") return &h_S;
  if (f == "h_T") return &h_T;
  if (f == "h_T_path") return &h_T_path;
  if (f == "Delta_in") return &Delta_in;
  if (f == "Delta_out") return &Delta_out;
  if (f == "Delta_fin") return &Delta_fin;
  if (f == "h_out") return &h_out;
  if (f == "k_out") return &k_out;
  if (f == "log2_C_kout") return &log2_C_kout;
  if (f == "epsilon_log2") return &epsilon_log2;
  return nullptr;
}

std::optional<double>* AttackParams::slot(std::string_view f) {
  return const_cast<std::optional<double>*>(
      static_cast<const AttackParams*>(this)->slot(f));
}

bool AttackParams::has(std::string_view field) const {
  if (field == "ell") return ell.has_value();
  const auto* s = slot(field);
  if (s == nullptr) {
    throw Error(Errc::invalid_argument,
                "unknown parameter '" + std::string(field) + "'");
  }
  return s->has_value();
}

double AttackParams::get(std::string_view field) const {
  require({field});
  if (field == "ell") return static_cast<double>(*ell);
  return **slot(field);
}

void AttackParams::require(std::initializer_list<std::string_view> fields) const {
  std::string missing;
  for (auto f : fields) {
    if (!has(f)) {
      if (!missing.empty()) missing += ", ";
      missing += f;
    }
  }
  if (!missing.empty()) {
    throw Error(Errc::incomplete_params, "missing parameters: " + missing);
  }
}

void AttackParams::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(Errc::invalid_argument, msg);
  };
  for (auto name : param_field_names()) {
    if (name == "ell") continue;
    const auto& v = *slot(name);
    if (v && !std::isfinite(*v)) fail(std::string(name) + " must be finite");
  }
  if (n && *n < 1) fail("n must be >= 1");
  if (k && *k < 1) fail("k must be >= 1");
  for (auto name : {"h_S", "h_T", "h_T_path", "h_out"}) {
    const auto& v = *slot(name);
    if (v && *v < 0) fail(std::string(name) + " must be >= 0");
  }
  for (auto name : {"Delta_in", "Delta_out", "Delta_fin"}) {
    const auto& v = *slot(name);
    if (v && (*v < 0 || (n && *v > *n))) {
      fail(std::string(name) + " must lie in [0, n]");
    }
  }
  if (k_out && (*k_out < 0 || (k && *k_out > *k))) fail("k_out must lie in [0, k]");
  if (log2_C_kout && (*log2_C_kout < 0 || (k_out && *log2_C_kout > *k_out))) {
    fail("log2_C_kout must lie in [0, k_out]");
  }
  if (epsilon_log2 && *epsilon_log2 > 0) fail("epsilon_log2 must be <= 0 (bias in (0, 1])");
  if (ell && *ell < 1) fail("ell must be >= 1");
}

}  // namespace qdl
