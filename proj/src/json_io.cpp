#include "qdl/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "qdl/error.hpp"

namespace qdl {
namespace {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_of(const std::string& text, std::size_t offset) {
  Position p;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

std::string anchor(const std::string& source, Position p) {
  return source + ":" + std::to_string(p.line) + ":" + std::to_string(p.column) + ": ";
}

}  // namespace

JsonDocument parse_json_document(std::string text, std::string source) {
  JsonDocument doc{std::move(source), std::move(text), {}};
  try {
    doc.root = ordered_json::parse(doc.text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(Errc::schema_violation,
                anchor(doc.source, position_of(doc.text, at)) + "malformed JSON: " + e.what());
  }
  return doc;
}

JsonDocument load_json_document(const std::filesystem::path& path) {
  return parse_json_document(read_text_file(path), path.string());
}

void schema_error(const JsonDocument& doc, std::string_view key, const std::string& message) {
  Position p;
  if (!key.empty()) {
    const std::string quoted = "\"" + std::string(key) + "\"";
    std::size_t at = 0;
    while ((at = doc.text.find(quoted, at)) != std::string::npos) {
      std::size_t j = at + quoted.size();
      while (j < doc.text.size() && std::isspace(static_cast<unsigned char>(doc.text[j]))) ++j;
      if (j < doc.text.size() && doc.text[j] == ':') {
        p = position_of(doc.text, at);
        break;
      }
      at += quoted.size();
    }
  }
  throw Error(Errc::schema_violation, anchor(doc.source, p) + message);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::invalid_argument, "write failed for " + path.string());
}

}  // namespace qdl
