#include "stylo/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stylo/unicode.hpp"

namespace stylo {

namespace {

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_keys(const std::vector<std::u32string>& keys) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& key : keys) {
    const std::string utf8 = uni::encode_utf8(key);
    // length prefix keeps concatenated keys unambiguous
    const std::uint64_t len = utf8.size();
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&len), sizeof len), h);
    h = fnv1a64(utf8, h);
  }
  return h;
}

}  // namespace

feature_space::feature_space(std::vector<std::u32string> keys) : features_(std::move(keys)) {
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) {
    if (!index_.emplace(features_[i], i).second) {
      fail(errc::duplicate_id, "feature space: duplicate key \"" + uni::encode_utf8(features_[i]) + "\"");
    }
  }
  hash_ = hash_keys(features_);
}

std::ptrdiff_t feature_space::index_of(const std::u32string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return -1;
  return static_cast<std::ptrdiff_t>(it->second);
}

void require_same_space(const feature_vector& a, const feature_vector& b) {
  if (a.space == b.space) return;
  if (a.space && b.space && *a.space == *b.space) return;
  fail(errc::space_mismatch, "feature vectors live in different feature spaces");
}

void require_space(const feature_vector& v, const feature_space_ptr& space) {
  if (v.space == space) return;
  if (v.space && space && *v.space == *space) return;
  fail(errc::space_mismatch, "feature vector does not match the expected feature space");
}

ngram_count_table extract_ngram_counts(std::u32string_view text, int n, ngram_options opts) {
  if (n < 1) {
    fail(errc::bad_argument, "extract_ngram_counts: n must be >= 1");
  }

  // One stream per document: whitespace vanishes, so grams straddle what used
  // to be word boundaries.
  std::u32string stream;
  stream.reserve(text.size());
  for (char32_t cp : text) {
    if (uni::is_whitespace(cp)) continue;
    if (opts.strip_punctuation && uni::is_punctuation(cp)) continue;
    stream.push_back(cp);
  }

  ngram_count_table table;
  table.n = n;
  const std::size_t un = static_cast<std::size_t>(n);
  if (stream.size() < un) {
    return table;
  }
  table.total = static_cast<std::int64_t>(stream.size() - un + 1);
  table.counts.reserve(static_cast<std::size_t>(table.total));
  for (std::size_t i = 0; i + un <= stream.size(); ++i) {
    ++table.counts[stream.substr(i, un)];
  }
  return table;
}

namespace {

feature_space_ptr space_from_sorted_union(std::vector<std::u32string> keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return std::make_shared<feature_space>(std::move(keys));
}

}  // namespace

feature_space_ptr build_master_list(const std::vector<ngram_count_table>& tables) {
  if (tables.empty()) {
    fail(errc::empty_input, "build_master_list: no tables");
  }
  std::vector<std::u32string> keys;
  for (const auto& t : tables) {
    for (const auto& [gram, count] : t.counts) {
      (void)count;
      keys.push_back(gram);
    }
  }
  return space_from_sorted_union(std::move(keys));
}

feature_space_ptr build_master_list(const std::vector<word_frequency_table>& tables) {
  if (tables.empty()) {
    fail(errc::empty_input, "build_master_list: no tables");
  }
  std::vector<std::u32string> keys;
  for (const auto& t : tables) {
    for (const auto& [word, freq] : t.entries) {
      (void)freq;
      keys.push_back(word);
    }
  }
  return space_from_sorted_union(std::move(keys));
}

feature_vector vectorize_relative(const ngram_count_table& table, feature_space_ptr space) {
  if (table.total <= 0) {
    fail(errc::zero_total, "vectorize_relative: table holds no grams");
  }
  feature_vector v;
  v.space = space;
  v.values.assign(space->size(), 0.0);
  const double total = static_cast<double>(table.total);
  for (const auto& [gram, count] : table.counts) {
    const std::ptrdiff_t idx = space->index_of(gram);
    if (idx >= 0) {
      v.values[static_cast<std::size_t>(idx)] = static_cast<double>(count) / total;
    }
  }
  return v;
}

feature_vector vectorize_word_freqs(const word_frequency_table& table, feature_space_ptr space) {
  feature_vector v;
  v.space = space;
  v.values.assign(space->size(), 0.0);
  for (const auto& [word, freq] : table.entries) {
    const std::ptrdiff_t idx = space->index_of(word);
    if (idx >= 0) {
      v.values[static_cast<std::size_t>(idx)] = freq;
    }
  }
  return v;
}

std::vector<std::u32string> tokenize_words(std::u32string_view text) {
  std::vector<std::u32string> tokens;
  std::u32string current;
  for (char32_t cp : text) {
    if (uni::is_letter(cp)) {
      current.push_back(uni::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

word_frequency_table word_freq_per_10k(const std::vector<std::u32string>& tokens) {
  if (tokens.empty()) {
    fail(errc::empty_input, "word_freq_per_10k: no tokens");
  }
  std::map<std::u32string, std::int64_t> counts;
  for (const auto& t : tokens) {
    ++counts[t];
  }
  word_frequency_table table;
  const double total = static_cast<double>(tokens.size());
  for (const auto& [word, count] : counts) {
    table.entries[word] = static_cast<double>(count) * 10000.0 / total;
  }
  return table;
}

word_frequency_table load_word_freq_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(errc::missing_file, "frequency table: cannot open \"" + path.string() + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = std::move(ss).str();
  std::string_view view = bytes;
  if (view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);

  word_frequency_table table;
  std::size_t line_no = 0;
  while (!view.empty()) {
    ++line_no;
    const std::size_t eol = view.find('\n');
    std::string_view line = view.substr(0, eol);
    view = (eol == std::string_view::npos) ? std::string_view{} : view.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty() || line.front() == '#') continue;

    const auto where = [&] { return path.string() + ":" + std::to_string(line_no); };
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      fail(errc::malformed_table, where() + ": expected word<TAB>frequency");
    }
    const std::string_view word_bytes = line.substr(0, tab);
    const std::string_view freq_bytes = line.substr(tab + 1);

    double freq = 0.0;
    const auto [ptr, ec] =
        std::from_chars(freq_bytes.data(), freq_bytes.data() + freq_bytes.size(), freq);
    if (ec != std::errc() || ptr != freq_bytes.data() + freq_bytes.size()) {
      fail(errc::malformed_table, where() + ": bad frequency \"" + std::string(freq_bytes) + "\"");
    }
    if (!(freq >= 0.0) || !std::isfinite(freq)) {
      fail(errc::malformed_table, where() + ": frequency must be non-negative and finite");
    }

    const std::u32string word = uni::nfc(uni::decode_utf8(word_bytes, where()));
    table.entries[word] += freq;
  }
  return table;
}

feature_space_ptr select_top_n(const std::vector<word_frequency_table>& tables, std::size_t n) {
  if (n < 1) {
    fail(errc::bad_argument, "select_top_n: n must be >= 1");
  }
  if (tables.empty()) {
    fail(errc::empty_input, "select_top_n: no tables");
  }
  std::map<std::u32string, double> combined;
  for (const auto& t : tables) {
    for (const auto& [word, freq] : t.entries) {
      combined[word] += freq;
    }
  }
  if (combined.size() < n) {
    fail(errc::bad_argument, "select_top_n: vocabulary has " + std::to_string(combined.size()) +
                                 " words, need " + std::to_string(n));
  }
  std::vector<std::pair<std::u32string, double>> ranked(combined.begin(), combined.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::u32string> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back(ranked[i].first);
  }
  return std::make_shared<feature_space>(std::move(keys));
}

min_max_scaler min_max_scaler::fit(const std::vector<feature_vector>& train) {
  if (train.empty()) {
    fail(errc::empty_input, "min_max_scaler: no training vectors");
  }
  min_max_scaler scaler;
  scaler.space_ = train.front().space;
  for (const auto& v : train) {
    require_space(v, scaler.space_);
  }
  const std::size_t dim = scaler.space_->size();
  scaler.min_ = train.front().values;
  scaler.max_ = train.front().values;
  for (std::size_t i = 1; i < train.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      scaler.min_[j] = std::min(scaler.min_[j], train[i].values[j]);
      scaler.max_[j] = std::max(scaler.max_[j], train[i].values[j]);
    }
  }
  return scaler;
}

feature_vector min_max_scaler::transform(const feature_vector& v) const {
  require_space(v, space_);
  feature_vector out;
  out.space = v.space;
  out.values.resize(v.values.size());
  for (std::size_t j = 0; j < v.values.size(); ++j) {
    const double range = max_[j] - min_[j];
    out.values[j] = range > 0.0 ? (v.values[j] - min_[j]) / range : 0.0;
  }
  return out;
}

}  // namespace stylo
