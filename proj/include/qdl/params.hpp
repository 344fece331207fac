#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qdl {

/// Which Q2 truncated last-rounds formula to use. `automatic` picks the
/// degenerate branch when a structure is expected to hold fewer than one
/// filtered pair (2*Delta_in - 1 - n + Delta_fin < 0). `filtered_pairs` is
/// the structured pair search with the key steps amplified over the
/// 2^{h_T + Delta_fin - n} filtered pairs alone, ignoring the structure count.
enum class Q2TruncatedBranch { automatic, structured, degenerate, filtered_pairs };

const char* to_string(Q2TruncatedBranch branch);
Q2TruncatedBranch parse_q2_branch(const std::string& text);

/// Attack parameter record. Every quantity except `ell` is in bits (log2).
/// Fields are optional; each formula asks for what it needs.
struct AttackParams {
  std::string cipher_name;
  std::optional<double> n;            // block size
  std::optional<double> k;            // key size
  std::optional<double> h_S;          // -log2 Pr[differential characteristic]
  std::optional<double> h_T;          // -log2 Pr[truncated differential]
  std::optional<double> h_T_path;     // -log2 Pr[truncated path], bias part only
  std::optional<double> Delta_in;
  std::optional<double> Delta_out;
  std::optional<double> Delta_fin;
  std::optional<double> h_out;
  std::optional<double> k_out;
  std::optional<double> log2_C_kout;
  std::optional<double> epsilon_log2;  // log2 of the linear bias
  std::optional<int> ell;              // number of linear approximations

  /// Accept truncated distinguishers that fail the 4-bit validity margin.
  bool allow_weak_truncated = false;
  Q2TruncatedBranch q2_branch = Q2TruncatedBranch::automatic;
  std::string notes;

  /// Throws Errc::incomplete_params naming every absent field.
  void require(std::initializer_list<std::string_view> fields) const;
  bool has(std::string_view field) const;
  /// Range checks on whatever is populated; throws Errc::invalid_argument.
  void validate() const;

  double get(std::string_view field) const;
  std::optional<double>* slot(std::string_view field);
  const std::optional<double>* slot(std::string_view field) const;

  friend bool operator==(const AttackParams&, const AttackParams&) = default;
};

/// Table names of the numeric parameter fields, in file order.
const std::vector<std::string_view>& param_field_names();

}  // namespace qdl
