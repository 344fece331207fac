#pragma once

#include <set>
#include <string>
#include <vector>

#include "qdl/attack_models.hpp"
#include "qdl/classical_attacks.hpp"
#include "qdl/json_io.hpp"

namespace qdl {

inline constexpr const char* tool_name = "qdl";
inline constexpr const char* tool_version = "0.1.0";

/// {"value": "58.17", "raw": 58.169925...}; the zero sentinel renders as
/// {"value": "zero", "raw": null}.
ordered_json to_json(const LogWork& w);
ordered_json to_json(const Term& t);
ordered_json to_json(const Complexity& c);
ordered_json to_json(const Verdict& v);
ordered_json to_json(const WorkLedger& l);

/// Header shared by every report: tool, version, command, seeds.
/// "0x" plus ceil(bits/4) hex digits.
std::string hex_string(std::uint64_t v, int bits);
/// Two decimals, as every rendered log2 value.
std::string fixed2(double v);

ordered_json report_header(const std::string& command, const std::vector<std::uint64_t>& seeds);

struct EstimateRequest {
  AttackParams params;
  std::string source;
  std::vector<AdversaryModel> models;
  /// Empty means every kind, silently skipping the ones that do not apply.
  std::set<AttackKind> kinds;
};

/// Evaluates the requested kinds per model. An explicit kind set is strict:
/// a kind with missing parameters throws Errc::incomplete_params.
ordered_json estimate_report(const EstimateRequest& request);

/// Plain-text rendering of the "models" section of a report.
/// "2^x" for a rendered LogWork, "0" for zero work.
std::string power_text(const ordered_json& log2);
std::string render_models_text(const ordered_json& report);

}  // namespace qdl
