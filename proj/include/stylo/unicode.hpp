#pragma once

#include <string>
#include <string_view>

namespace stylo::uni {

// Strict UTF-8 decoding: rejects overlong forms, surrogates, truncated
// sequences and codepoints beyond U+10FFFF. `origin` names the input in
// diagnostics (a file path, a manifest entry id).
std::u32string decode_utf8(std::string_view bytes, std::string_view origin = {});

std::string encode_utf8(std::u32string_view codepoints);

// Canonical composition (NFC). Total over valid codepoint sequences.
std::u32string nfc(std::u32string_view codepoints);

bool is_whitespace(char32_t cp);
bool is_letter(char32_t cp);
bool is_punctuation(char32_t cp);
char32_t to_lower(char32_t cp);

}  // namespace stylo::uni
