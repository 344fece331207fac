#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace qdl {

using ordered_json = nlohmann::ordered_json;

/// Raw document text kept next to the parsed tree, so schema errors can
/// point at a line.
struct JsonDocument {
  std::string source;  // file name or "<input>"
  std::string text;
  ordered_json root;
};

/// Throws Errc::schema_violation as "source:line:col: message".
JsonDocument parse_json_document(std::string text, std::string source = "<input>");
JsonDocument load_json_document(const std::filesystem::path& path);

/// Throws Errc::schema_violation anchored at the first occurrence of "key"
/// in the text (line 1 when the key is absent).
[[noreturn]] void schema_error(const JsonDocument& doc, std::string_view key,
                               const std::string& message);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qdl
