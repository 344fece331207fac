#pragma once

#include <filesystem>
#include <string>

#include "qdl/json_io.hpp"
#include "qdl/toy_cipher.hpp"

namespace qdl {

/// {"name", "structure": "spn"|"feistel", "block_n", "rounds",
///  "sbox": {"width", "table": [...]}, "permutation": [...],
///  "key_schedule": "independent"|"xor_master", "key_bits", "key_rotation"}
/// The key fields are only read for xor_master.
ToyCipherSpec cipher_from_json(const JsonDocument& doc);
ToyCipherSpec parse_cipher(std::string text, std::string source = "<input>");
ToyCipherSpec load_cipher(const std::filesystem::path& path);

ordered_json cipher_to_json(const ToyCipherSpec& spec);
std::string serialize_cipher(const ToyCipherSpec& spec);

}  // namespace qdl
