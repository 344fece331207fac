#pragma once

#include <filesystem>
#include <string>

#include "qdl/json_io.hpp"
#include "qdl/params.hpp"

namespace qdl {

/// Parameter file: a flat JSON object with "cipher_name", the numeric
/// fields of AttackParams (all log2 except the integer "ell"),
/// "allow_weak_truncated", "q2_branch" and "notes". Unknown keys, wrong types
/// and out-of-range values throw Errc::schema_violation with the line of the
/// offending key.
AttackParams params_from_json(const JsonDocument& doc);
AttackParams parse_params(std::string text, std::string source = "<input>");
AttackParams load_params(const std::filesystem::path& path);

ordered_json params_to_json(const AttackParams& p);
/// Two-space indented, trailing newline.
std::string serialize_params(const AttackParams& p);

}  // namespace qdl
