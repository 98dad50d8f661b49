#include "stylo/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <vector>

#include "stylo/error.hpp"

namespace stylo::uni {

namespace {

[[noreturn]] void bad_utf8(std::string_view origin, std::size_t offset) {
  std::string where = origin.empty() ? std::string("input") : std::string(origin);
  fail(errc::invalid_utf8, where + ": invalid UTF-8 at byte " + std::to_string(offset));
}

}  // namespace

std::u32string decode_utf8(std::string_view bytes, std::string_view origin) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    char32_t min_cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
      min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
      min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
      min_cp = 0x10000;
    } else {
      bad_utf8(origin, i);
    }
    if (i + static_cast<std::size_t>(len) > n) bad_utf8(origin, i);
    for (int k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
      if ((bk & 0xC0) != 0x80) bad_utf8(origin, i);
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) bad_utf8(origin, i);
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string encode_utf8(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 2);
  for (char32_t cp : codepoints) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::u32string nfc(std::u32string_view codepoints) {
  if (codepoints.empty()) return {};

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC instance unavailable");
  }

  std::vector<UChar32> in(codepoints.begin(), codepoints.end());
  icu::UnicodeString source = icu::UnicodeString::fromUTF32(in.data(), static_cast<int32_t>(in.size()));
  icu::UnicodeString composed = norm->normalize(source, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU normalization failed");
  }

  status = U_ZERO_ERROR;
  const int32_t len32 = composed.toUTF32(nullptr, 0, status);
  status = U_ZERO_ERROR;
  std::vector<UChar32> out(static_cast<std::size_t>(len32) + 1);
  composed.toUTF32(out.data(), len32 + 1, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU UTF-32 conversion failed");
  }
  return std::u32string(out.begin(), out.begin() + len32);
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)) != 0; }

bool is_punctuation(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)) != 0; }

char32_t to_lower(char32_t cp) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

}  // namespace stylo::uni
