#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stylo/error.hpp"

namespace stylo {

struct ngram_options {
  // The gram stream always drops whitespace; punctuation is kept unless this
  // is set (digits and non-Greek letters are always kept).
  bool strip_punctuation = false;
};

// Raw window counts over one document's whitespace-stripped stream.
struct ngram_count_table {
  int n = 0;
  std::unordered_map<std::u32string, std::int64_t> counts;
  std::int64_t total = 0;  // = max(0, stream_length - n + 1)
};

// Ordered master list of feature keys (grams or words). Master lists are
// codepoint-lexicographic; top-k lists keep selection order (combined
// frequency descending, then lexicographic).
class feature_space {
 public:
  explicit feature_space(std::vector<std::u32string> keys);

  const std::vector<std::u32string>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }

  // -1 when the key is not part of the space.
  std::ptrdiff_t index_of(const std::u32string& key) const;

  std::uint64_t content_hash() const { return hash_; }

  bool operator==(const feature_space& other) const { return features_ == other.features_; }

 private:
  std::vector<std::u32string> features_;
  std::unordered_map<std::u32string, std::size_t> index_;
  std::uint64_t hash_ = 0;
};

using feature_space_ptr = std::shared_ptr<const feature_space>;

struct feature_vector {
  feature_space_ptr space;
  std::vector<double> values;
};

// Throws errc::space_mismatch unless both vectors live in the same space.
void require_same_space(const feature_vector& a, const feature_vector& b);
void require_space(const feature_vector& v, const feature_space_ptr& space);

// word -> frequency per 10,000 words
struct word_frequency_table {
  std::map<std::u32string, double> entries;
};

// Counts every window of n consecutive codepoints after whitespace removal;
// windows spanning former whitespace boundaries count. A stream shorter than
// n yields an empty table, not an error.
ngram_count_table extract_ngram_counts(std::u32string_view text, int n, ngram_options opts = {});

feature_space_ptr build_master_list(const std::vector<ngram_count_table>& tables);
feature_space_ptr build_master_list(const std::vector<word_frequency_table>& tables);

// values[i] = counts[space[i]] / total; 0 for grams absent from the table.
feature_vector vectorize_relative(const ngram_count_table& table, feature_space_ptr space);

// Aligned per-10k frequencies; 0 for words absent from the table.
feature_vector vectorize_word_freqs(const word_frequency_table& table, feature_space_ptr space);

// Maximal runs of letter codepoints, lowercased; punctuation and digits
// separate tokens; diacritics preserved. Surface forms only.
std::vector<std::u32string> tokenize_words(std::u32string_view text);

word_frequency_table word_freq_per_10k(const std::vector<std::u32string>& tokens);

// TSV: one `word<TAB>frequency` per line, `#` comments ignored, frequencies
// non-negative decimals. Frequencies are taken as given (weighting happens
// upstream); duplicate words accumulate.
word_frequency_table load_word_freq_table(const std::filesystem::path& path);

// The n most common words by frequency summed across all supplied tables,
// ties broken codepoint-lexicographically.
feature_space_ptr select_top_n(const std::vector<word_frequency_table>& tables, std::size_t n);

class min_max_scaler {
 public:
  static min_max_scaler fit(const std::vector<feature_vector>& train);

  // (x - min) / (max - min); constant features map to 0; values outside the
  // training range are not clipped.
  feature_vector transform(const feature_vector& v) const;

  const feature_space_ptr& space() const { return space_; }
  const std::vector<double>& minima() const { return min_; }
  const std::vector<double>& maxima() const { return max_; }

 private:
  feature_space_ptr space_;
  std::vector<double> min_;
  std::vector<double> max_;
};

}  // namespace stylo
