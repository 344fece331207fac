#include <doctest.h>

#include <filesystem>
#include <string>

#include "qdl/attack_models.hpp"
#include "qdl/cipher_io.hpp"
#include "qdl/error.hpp"
#include "qdl/param_io.hpp"
#include "qdl/presets.hpp"
#include "qdl/report.hpp"

using namespace qdl;

namespace {

const std::filesystem::path data_dir = std::filesystem::path(QDL_SOURCE_DIR) / "data";

std::string error_text(const std::string& text) {
  try {
    parse_params(text, "p.json");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::schema_violation);
    return e.what();
  }
  return "";
}

ToyCipherSpec feistel() {
  ToyCipherSpec s;
  s.name = "f16";
  s.structure = CipherStructure::feistel;
  s.block_n = 16;
  s.rounds = 7;
  s.sbox = heys4_sbox();
  s.permutation = {7, 6, 5, 4, 3, 2, 1, 0};
  return s;
}

}  // namespace

TEST_CASE("parameter round trip") {
  for (const auto& t : reproduction_targets()) {
    const auto p = preset_params(t);
    CHECK(parse_params(serialize_params(p)) == p);
  }
  AttackParams p;
  p.cipher_name = "x";
  p.n = 32;
  p.epsilon_log2 = -7.25;
  p.ell = 3;
  p.q2_branch = Q2TruncatedBranch::degenerate;
  p.notes = "with \"quotes\"";
  CHECK(parse_params(serialize_params(p)) == p);
  const auto text = serialize_params(p);
  CHECK(text.find("\"n\": 32,") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("shipped parameter files match the presets") {
  for (const auto& t : reproduction_targets()) {
    CHECK(load_params(data_dir / "presets" / (t + ".json")) == preset_params(t));
  }
}

TEST_CASE("cipher round trip and shipped ciphers") {
  for (const auto& s : {reference_spn12(5), reference_spn16(4), feistel()}) {
    CHECK(parse_cipher(serialize_cipher(s)) == s);
  }
  CHECK(load_cipher(data_dir / "ciphers" / "toy12.json") == reference_spn12(5));
  CHECK(load_cipher(data_dir / "ciphers" / "toy16.json") == reference_spn16(4));
}

TEST_CASE("parameter schema errors carry the line") {
  CHECK(error_text("{\n  \"n\": 64,\n  \"h_X\": 3\n}") .rfind("p.json:3:", 0) == 0);
  CHECK(error_text("{\n  \"n\": \"64\"\n}").rfind("p.json:2:", 0) == 0);
  CHECK(error_text("{\"n\": 64,").rfind("p.json:1:", 0) == 0);
  CHECK(error_text("[1, 2]").find("p.json") == 0);
  CHECK(error_text("{\"ell\": 2.5}") != "");
  CHECK(error_text("{\"q2_branch\": \"sideways\"}") != "");
  CHECK(error_text("{\"allow_weak_truncated\": 1}") != "");
}

TEST_CASE("cipher schema errors") {
  auto bad = [](const std::string& text) {
    try {
      parse_cipher(text, "c.json");
    } catch (const Error&) {
      return true;
    }
    return false;
  };
  auto j = cipher_to_json(reference_spn12(3));
  CHECK_FALSE(bad(j.dump()));
  auto k = j;
  k["structure"] = "sponge";
  CHECK(bad(k.dump()));
  k = j;
  k["sbox"]["table"][0] = 1;
  CHECK(bad(k.dump()));
  k = j;
  k["surprise"] = true;
  CHECK(bad(k.dump()));
  k = j;
  k["block_n"] = 30;
  CHECK(bad(k.dump()));
}

TEST_CASE("estimate report") {
  const auto p = preset_params("klein64");
  EstimateRequest req{p, "klein64.json", {AdversaryModel::classical, AdversaryModel::q2}, {}};
  const auto r = estimate_report(req);
  CHECK(r.at("command") == "estimate");
  CHECK(r.at("models").size() == 2);
  const auto& q2 = r.at("models").at(1);
  CHECK(q2.at("model") == "q2");
  CHECK(q2.at("generic_bound").at("value") == "32.00");
  bool saw = false;
  for (const auto& a : q2.at("attacks")) {
    if (a.at("kind") != to_string(AttackKind::trunc_diff_last_rounds)) continue;
    saw = true;
    for (const auto& t : a.at("terms")) {
      if (t.at("label") == "key-generation") CHECK(t.at("log2").at("value") == "34.75");
    }
  }
  CHECK(saw);
  // A named kind that lacks inputs is an error, not a silent skip.
  req.kinds = {AttackKind::matsui2};
  CHECK_THROWS_AS(estimate_report(req), Error);
  req.models.clear();
  req.kinds.clear();
  CHECK_THROWS_AS(estimate_report(req), Error);
  CHECK(render_models_text(r).find("[q2]") != std::string::npos);
}

TEST_CASE("value formatting") {
  CHECK(hex_string(0xab, 12) == "0x0ab");
  CHECK(hex_string(0, 1) == "0x0");
  CHECK(fixed2(34.745) == "34.74");
  CHECK(fixed2(2.0) == "2.00");
  CHECK(power_text(to_json(LogWork::zero())) == "0");
  CHECK(power_text(to_json(LogWork::bits(3.5))) == "2^3.50");
}

TEST_CASE("shipped schemas list every field") {
  const auto root = std::filesystem::path(QDL_SOURCE_DIR) / "docs" / "schemas";
  const auto params = load_json_document(root / "params.schema.json").root.at("properties");
  for (auto name : param_field_names()) CHECK(params.contains(std::string(name)));
  for (auto b : {Q2TruncatedBranch::automatic, Q2TruncatedBranch::structured,
                 Q2TruncatedBranch::degenerate, Q2TruncatedBranch::filtered_pairs}) {
    bool listed = false;
    for (const auto& v : params.at("q2_branch").at("enum")) listed = listed || v.get<std::string>() == to_string(b);
    CHECK(listed);
  }
  const auto cipher = load_json_document(root / "cipher.schema.json").root.at("properties");
  const auto spec_json = cipher_to_json(reference_spn12(5));
  for (const auto& [key, value] : spec_json.items()) CHECK(cipher.contains(key));
  const auto report = load_json_document(root / "report.schema.json").root;
  const auto& kinds = report.at("$defs").at("attack").at("properties").at("kind").at("enum");
  CHECK(kinds.size() == all_attack_kinds().size());
  for (auto k : all_attack_kinds()) {
    bool listed = false;
    for (const auto& v : kinds) listed = listed || v.get<std::string>() == to_string(k);
    CHECK(listed);
  }
}
