#include "qdl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "qdl/error.hpp"
#include "qdl/param_io.hpp"

namespace qdl {
namespace {

ordered_json model_section(const AttackParams& p, AdversaryModel m,
                           const std::set<AttackKind>& kinds, bool strict) {
  ordered_json out;
  out["model"] = to_string(m);
  if (strict) {
    // Surface missing fields instead of skipping the kind.
    for (auto kind : kinds) (void)evaluate(kind, p, m);
  }
  const auto ranked = best_attack(p, m, kinds.empty() ? std::set<AttackKind>(all_attack_kinds().begin(),
                                                                              all_attack_kinds().end())
                                                      : kinds);
  out["generic_bound"] = to_json(ranked.front().verdict.generic_bound);
  out["attacks"] = ordered_json::array();
  // Attacks listed in kind order, ranking separately.
  for (auto kind : all_attack_kinds()) {
    for (const auto& r : ranked) {
      if (r.kind != kind) continue;
      ordered_json a;
      a["kind"] = to_string(kind);
      const auto cj = to_json(r.complexity);
      for (const auto& [k, v] : cj.items()) a[k] = v;
      a["verdict"] = to_json(r.verdict);
      out["attacks"].push_back(std::move(a));
    }
  }
  out["ranking"] = ordered_json::array();
  for (const auto& r : ranked) out["ranking"].push_back(to_string(r.kind));
  return out;
}

}  // namespace

std::string hex_string(std::uint64_t v, int bits) {
  std::ostringstream out;
  out << "0x" << std::hex << std::setfill('0') << std::setw(std::max(1, (bits + 3) / 4)) << v;
  return out.str();
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

ordered_json to_json(const LogWork& w) {
  ordered_json j;
  if (w.is_zero()) {
    j["value"] = "zero";
    j["raw"] = nullptr;
  } else {
    j["value"] = fixed2(w.bits());
    j["raw"] = w.bits();
  }
  return j;
}

ordered_json to_json(const Term& t) {
  ordered_json j;
  j["label"] = t.label;
  j["log2"] = to_json(t.value);
  if (t.upper_bound) j["upper_bound"] = true;
  return j;
}

ordered_json to_json(const Complexity& c) {
  ordered_json j;
  j["time"] = to_json(c.time);
  j["data"] = to_json(c.data);
  j["terms"] = ordered_json::array();
  for (const auto& t : c.terms) j["terms"].push_back(to_json(t));
  if (!c.details.empty()) {
    j["details"] = ordered_json::array();
    for (const auto& t : c.details) j["details"].push_back(to_json(t));
  }
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

ordered_json to_json(const Verdict& v) {
  ordered_json j;
  j["broken"] = v.broken;
  j["generic_bound"] = to_json(v.generic_bound);
  j["margin_bits"] = fixed2(v.margin_bits);
  return j;
}

ordered_json to_json(const WorkLedger& l) {
  ordered_json j;
  j["encryption_queries"] = l.encryption_queries;
  j["partial_decryptions"] = l.partial_decryptions;
  j["key_trials"] = l.key_trials;
  return j;
}

ordered_json report_header(const std::string& command, const std::vector<std::uint64_t>& seeds) {
  ordered_json j;
  j["tool"] = tool_name;
  j["version"] = tool_version;
  j["command"] = command;
  j["seeds"] = seeds;
  return j;
}

ordered_json estimate_report(const EstimateRequest& req) {
  if (req.models.empty()) throw Error(Errc::invalid_argument, "no adversary model requested");
  auto report = report_header("estimate", {});
  report["input"]["source"] = req.source;
  report["input"]["params"] = params_to_json(req.params);
  report["models"] = ordered_json::array();
  for (auto m : req.models) {
    report["models"].push_back(model_section(req.params, m, req.kinds, !req.kinds.empty()));
  }
  return report;
}

std::string power_text(const ordered_json& log2) {
  const auto v = log2.at("value").get<std::string>();
  return v == "zero" ? "0" : "2^" + v;
}

std::string render_models_text(const ordered_json& report) {
  std::ostringstream out;
  for (const auto& section : report.at("models")) {
    out << "[" << section.at("model").get<std::string>() << "]  generic bound "
        << power_text(section.at("generic_bound")) << "\n";
    for (const auto& a : section.at("attacks")) {
      out << "  " << a.at("kind").get<std::string>() << ": time "
          << power_text(a.at("time")) << ", data " << power_text(a.at("data")) << ", "
          << (a.at("verdict").at("broken").get<bool>() ? "broken" : "not broken") << "\n";
      for (const auto& t : a.at("terms")) {
        out << "      " << t.at("label").get<std::string>() << " "
            << (t.contains("upper_bound") ? "<= " : "")
            << power_text(t.at("log2")) << "\n";
      }
      if (a.contains("details")) {
        for (const auto& t : a.at("details")) {
          out << "      (" << t.at("label").get<std::string>() << " "
              << power_text(t.at("log2")) << ")\n";
        }
      }
      if (a.contains("notes")) {
        for (const auto& n : a.at("notes")) out << "      note: " << n.get<std::string>() << "\n";
      }
    }
    out << "  ranking:";
    for (const auto& k : section.at("ranking")) out << " " << k.get<std::string>();
    out << "\n";
  }
  return out.str();
}

}  // namespace qdl
