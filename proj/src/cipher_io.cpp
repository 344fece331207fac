#include "qdl/cipher_io.hpp"

#include <set>

#include "qdl/error.hpp"

namespace qdl {
namespace {

int get_int(const JsonDocument& doc, const ordered_json& obj, const std::string& key, int lo,
            int hi) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(doc, "", "missing field \"" + key + "\"");
  if (!it->is_number_integer()) schema_error(doc, key, "\"" + key + "\" must be an integer");
  const auto v = it->get<long long>();
  if (v < lo || v > hi) {
    schema_error(doc, key,
                 "\"" + key + "\" must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

std::string get_string(const JsonDocument& doc, const ordered_json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(doc, "", "missing field \"" + key + "\"");
  if (!it->is_string()) schema_error(doc, key, "\"" + key + "\" must be a string");
  return it->get<std::string>();
}

std::vector<int> get_int_array(const JsonDocument& doc, const ordered_json& obj,
                               const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(doc, "", "missing field \"" + key + "\"");
  if (!it->is_array()) schema_error(doc, key, "\"" + key + "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 255) {
      schema_error(doc, key, "\"" + key + "\" entries must be integers in [0, 255]");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

void reject_unknown(const JsonDocument& doc, const ordered_json& obj,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) schema_error(doc, key, "unknown field \"" + key + "\"");
  }
}

// Key to anchor a validate() message on.
std::string field_of(const std::string& message) {
  for (const char* k : {"permutation", "block_n", "rounds", "key_bits", "key_rotation"}) {
    if (message.starts_with(k)) return k;
  }
  if (message.starts_with("S-box") || message.starts_with("layer")) return "sbox";
  if (message.starts_with("Feistel")) return "structure";
  return "";
}

}  // namespace

ToyCipherSpec cipher_from_json(const JsonDocument& doc) {
  const auto& root = doc.root;
  if (!root.is_object()) schema_error(doc, "", "cipher spec must be a JSON object");
  reject_unknown(doc, root,
                 {"$schema", "name", "structure", "block_n", "rounds", "sbox", "permutation",
                  "key_schedule", "key_bits", "key_rotation"});

  ToyCipherSpec s;
  s.name = get_string(doc, root, "name");
  const auto structure = get_string(doc, root, "structure");
  if (structure == "spn") {
    s.structure = CipherStructure::spn;
  } else if (structure == "feistel") {
    s.structure = CipherStructure::feistel;
  } else {
    schema_error(doc, "structure", "\"structure\" must be \"spn\" or \"feistel\"");
  }
  s.block_n = get_int(doc, root, "block_n", 2, max_block_bits);
  s.rounds = get_int(doc, root, "rounds", 1, 64);

  const auto sbox = root.find("sbox");
  if (sbox == root.end()) schema_error(doc, "", "missing field \"sbox\"");
  if (!sbox->is_object()) schema_error(doc, "sbox", "\"sbox\" must be an object");
  reject_unknown(doc, *sbox, {"width", "table"});
  s.sbox.width = get_int(doc, *sbox, "width", 3, 4);
  for (int v : get_int_array(doc, *sbox, "table")) s.sbox.table.push_back(static_cast<std::uint8_t>(v));

  s.permutation = get_int_array(doc, root, "permutation");

  const auto schedule = root.contains("key_schedule") ? get_string(doc, root, "key_schedule")
                                                      : std::string("independent");
  if (schedule == "independent") {
    s.key_schedule = KeySchedule::independent;
  } else if (schedule == "xor_master") {
    s.key_schedule = KeySchedule::xor_master;
    s.key_bits = get_int(doc, root, "key_bits", 1, 64);
    s.key_rotation = root.contains("key_rotation") ? get_int(doc, root, "key_rotation", 0, 64) : 0;
  } else {
    schema_error(doc, "key_schedule", "\"key_schedule\" must be \"independent\" or \"xor_master\"");
  }

  try {
    s.validate();
  } catch (const Error& e) {
    schema_error(doc, field_of(e.what()), e.what());
  }
  return s;
}

ToyCipherSpec parse_cipher(std::string text, std::string source) {
  return cipher_from_json(parse_json_document(std::move(text), std::move(source)));
}

ToyCipherSpec load_cipher(const std::filesystem::path& path) {
  return cipher_from_json(load_json_document(path));
}

ordered_json cipher_to_json(const ToyCipherSpec& s) {
  ordered_json j;
  j["name"] = s.name;
  j["structure"] = to_string(s.structure);
  j["block_n"] = s.block_n;
  j["rounds"] = s.rounds;
  ordered_json sbox;
  sbox["width"] = s.sbox.width;
  sbox["table"] = ordered_json::array();
  for (auto v : s.sbox.table) sbox["table"].push_back(static_cast<int>(v));
  j["sbox"] = std::move(sbox);
  j["permutation"] = s.permutation;
  j["key_schedule"] = to_string(s.key_schedule);
  if (s.key_schedule == KeySchedule::xor_master) {
    j["key_bits"] = s.key_bits;
    j["key_rotation"] = s.key_rotation;
  }
  return j;
}

std::string serialize_cipher(const ToyCipherSpec& s) { return cipher_to_json(s).dump(2) + "\n"; }

}  // namespace qdl
