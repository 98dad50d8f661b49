#include "stylo/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "stylo/unicode.hpp"

namespace stylo {

doc_role parse_doc_role(std::string_view s) {
  if (s == "train") return doc_role::train;
  if (s == "test") return doc_role::test;
  if (s == "comparison") return doc_role::comparison;
  fail(errc::malformed_manifest, "unknown role \"" + std::string(s) + "\"");
}

std::string_view to_string(doc_role r) {
  switch (r) {
    case doc_role::train: return "train";
    case doc_role::test: return "test";
    case doc_role::comparison: return "comparison";
  }
  return "comparison";
}

const document_unit* corpus::find(std::string_view id) const {
  for (const auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

const document_unit& corpus::at(std::string_view id) const {
  if (const document_unit* u = find(id)) return *u;
  fail(errc::unknown_document, "no document with id \"" + std::string(id) + "\"");
}

std::u32string normalize_text(std::string_view raw_utf8) {
  return uni::nfc(uni::decode_utf8(raw_utf8));
}

std::u32string normalize_text(std::u32string_view raw) { return uni::nfc(raw); }

namespace {

std::string read_file_bytes(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(errc::missing_file, what + ": cannot open \"" + path.string() + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    fail(errc::io_failure, what + ": read failed for \"" + path.string() + "\"");
  }
  return std::move(ss).str();
}

std::string_view strip_bom(std::string_view bytes) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    return bytes.substr(3);
  }
  return bytes;
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail(errc::malformed_manifest, where + ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

corpus load_manifest(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path, "manifest");

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(strip_bom(bytes));
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::malformed_manifest, "\"" + path.string() + "\": " + e.what());
  }
  if (!doc.is_object()) {
    fail(errc::malformed_manifest, "\"" + path.string() + "\": top level must be an object");
  }

  const std::string policy = require_string(doc, "normalization", "manifest");
  if (policy != "nfc_preserve_diacritics") {
    fail(errc::malformed_manifest, "unsupported normalization policy \"" + policy + "\"");
  }
  auto docs_it = doc.find("documents");
  if (docs_it == doc.end() || !docs_it->is_array()) {
    fail(errc::malformed_manifest, "\"" + path.string() + "\": missing \"documents\" array");
  }

  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";

  corpus out;
  out.policy = normalization_policy::nfc_preserve_diacritics;
  std::unordered_set<std::string> seen_ids;

  std::size_t index = 0;
  for (const auto& entry : *docs_it) {
    const std::string where = "documents[" + std::to_string(index) + "]";
    if (!entry.is_object()) {
      fail(errc::malformed_manifest, where + ": entry must be an object");
    }

    document_unit unit;
    unit.id = require_string(entry, "id", where);
    unit.author = require_string(entry, "author", where);
    unit.work = require_string(entry, "work", where);
    unit.role = parse_doc_role(require_string(entry, "role", where));
    const std::string rel = require_string(entry, "path", where);

    if (unit.id.empty()) {
      fail(errc::malformed_manifest, where + ": empty id");
    }
    if (rel.empty()) {
      fail(errc::malformed_manifest, where + " (id \"" + unit.id + "\"): empty path");
    }
    if (!seen_ids.insert(unit.id).second) {
      fail(errc::duplicate_id, "duplicate document id \"" + unit.id + "\"");
    }

    std::filesystem::path file = rel;
    if (file.is_relative()) file = base / file;

    const std::string text_bytes = read_file_bytes(file, "document \"" + unit.id + "\"");
    unit.text = uni::nfc(uni::decode_utf8(strip_bom(text_bytes), file.string()));
    if (unit.text.empty()) {
      fail(errc::empty_document,
           "document \"" + unit.id + "\" (\"" + file.string() + "\") is empty after normalization");
    }

    out.units.push_back(std::move(unit));
    ++index;
  }

  return out;
}

std::vector<document_unit> truncate_to_shortest(std::vector<document_unit> units) {
  if (units.empty()) {
    fail(errc::empty_input, "truncate_to_shortest: no documents");
  }
  std::size_t shortest = units.front().text.size();
  for (const auto& u : units) {
    if (u.text.empty()) {
      fail(errc::empty_document, "truncate_to_shortest: document \"" + u.id + "\" has empty text");
    }
    shortest = std::min(shortest, u.text.size());
  }
  for (auto& u : units) {
    u.text.resize(shortest);
  }
  return units;
}

}  // namespace stylo
