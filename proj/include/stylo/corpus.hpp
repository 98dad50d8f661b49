#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stylo/error.hpp"

namespace stylo {

enum class doc_role { train, test, comparison };

doc_role parse_doc_role(std::string_view s);
std::string_view to_string(doc_role r);

// One chapter of a work: the unit every study operates on.
struct document_unit {
  std::string id;
  std::string author;
  std::string work;
  doc_role role = doc_role::comparison;
  std::u32string text;  // normalized codepoint sequence
};

enum class normalization_policy { nfc_preserve_diacritics };

struct corpus {
  std::vector<document_unit> units;
  normalization_policy policy = normalization_policy::nfc_preserve_diacritics;

  const document_unit* find(std::string_view id) const;
  // Throws errc::unknown_document when absent.
  const document_unit& at(std::string_view id) const;
};

// Canonical composition with diacritics and case preserved: an alpha with a
// breathing mark stays a distinct codepoint from a bare alpha.
std::u32string normalize_text(std::string_view raw_utf8);
std::u32string normalize_text(std::u32string_view raw);

// Manifest format:
//   { "normalization": "nfc_preserve_diacritics",
//     "documents": [ { "id", "author", "work", "role", "path" }, ... ] }
// Relative document paths resolve against the manifest's directory. Text
// files are UTF-8; a leading BOM is stripped.
corpus load_manifest(const std::filesystem::path& path);

// Cuts every text down to the length of the shortest one (suffix removal
// only); order and metadata are untouched.
std::vector<document_unit> truncate_to_shortest(std::vector<document_unit> units);

}  // namespace stylo
