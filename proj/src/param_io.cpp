#include "qdl/param_io.hpp"

#include <cmath>

#include "qdl/error.hpp"

namespace qdl {

AttackParams params_from_json(const JsonDocument& doc) {
  const auto& root = doc.root;
  if (!root.is_object()) schema_error(doc, "", "parameter file must be a JSON object");

  AttackParams p;
  for (const auto& [key, value] : root.items()) {
    if (key == "$schema") {
      if (!value.is_string()) schema_error(doc, key, "\"$schema\" must be a string");
    } else if (key == "cipher_name" || key == "notes") {
      if (!value.is_string()) schema_error(doc, key, "\"" + key + "\" must be a string");
      (key == "notes" ? p.notes : p.cipher_name) = value.get<std::string>();
    } else if (key == "allow_weak_truncated") {
      if (!value.is_boolean()) schema_error(doc, key, "\"allow_weak_truncated\" must be a boolean");
      p.allow_weak_truncated = value.get<bool>();
    } else if (key == "q2_branch") {
      if (!value.is_string()) schema_error(doc, key, "\"q2_branch\" must be a string");
      try {
        p.q2_branch = parse_q2_branch(value.get<std::string>());
      } catch (const Error& e) {
        schema_error(doc, key, e.what());
      }
    } else if (key == "ell") {
      if (!value.is_number_integer()) schema_error(doc, key, "\"ell\" must be an integer");
      const auto v = value.get<long long>();
      if (v < 1 || v > 1'000'000) schema_error(doc, key, "\"ell\" must lie in [1, 1000000]");
      p.ell = static_cast<int>(v);
    } else if (auto* slot = p.slot(key)) {
      if (!value.is_number()) schema_error(doc, key, "\"" + key + "\" must be a number (log2 units)");
      const double v = value.get<double>();
      if (!std::isfinite(v)) schema_error(doc, key, "\"" + key + "\" must be finite");
      *slot = v;
    } else {
      schema_error(doc, key, "unknown field \"" + key + "\"");
    }
  }

  try {
    p.validate();
  } catch (const Error& e) {
    // validate() names the field first; anchor on it.
    const std::string msg = e.what();
    schema_error(doc, msg.substr(0, msg.find(' ')), msg);
  }
  return p;
}

AttackParams parse_params(std::string text, std::string source) {
  return params_from_json(parse_json_document(std::move(text), std::move(source)));
}

AttackParams load_params(const std::filesystem::path& path) {
  return params_from_json(load_json_document(path));
}

ordered_json params_to_json(const AttackParams& p) {
  ordered_json j = ordered_json::object();
  if (!p.cipher_name.empty()) j["cipher_name"] = p.cipher_name;
  for (auto name : param_field_names()) {
    if (name == "ell") {
      if (p.ell) j["ell"] = *p.ell;
    } else if (const auto& v = *p.slot(name)) {
      // Integral values print without a fraction.
      if (std::trunc(*v) == *v && std::abs(*v) < 1e15) {
        j[std::string(name)] = static_cast<std::int64_t>(*v);
      } else {
        j[std::string(name)] = *v;
      }
    }
  }
  if (p.allow_weak_truncated) j["allow_weak_truncated"] = true;
  if (p.q2_branch != Q2TruncatedBranch::automatic) j["q2_branch"] = to_string(p.q2_branch);
  if (!p.notes.empty()) j["notes"] = p.notes;
  return j;
}

std::string serialize_params(const AttackParams& p) { return params_to_json(p).dump(2) + "\n"; }

}  // namespace qdl
