#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylo/classify.hpp"
#include "stylo/corpus.hpp"
#include "stylo/features.hpp"
#include "stylo/metrics.hpp"

namespace stylo {

inline constexpr std::string_view toolkit_version = "0.1.0";

enum class experiment_kind { ngram_intra, ngram_substitution, loo_classification };
enum class classifier_kind { nbc, svm };

std::string_view to_string(experiment_kind k);
std::string_view to_string(classifier_kind k);

struct feature_mode {
  bool all_words = true;
  std::size_t top_k = 0;

  static feature_mode all() { return {true, 0}; }
  static feature_mode top(std::size_t k) { return {false, k}; }
  std::string label() const;  // "all" / "top50"
};

// Document-id sets drive every study; ids resolve against a corpus at run
// time. For LOO runs an empty self_train means "the other target chapters".
struct experiment_spec {
  std::string name;
  experiment_kind kind = experiment_kind::ngram_intra;
  std::vector<int> n_values;                  // ngram kinds
  std::vector<feature_mode> feature_modes;    // loo kind
  classifier_kind classifier = classifier_kind::nbc;
  std::vector<std::string> target_work;
  std::string foreign_chapter;
  std::vector<std::string> self_train;
  std::vector<std::string> rival_train;
  // Optional precomputed per-document frequency tables (TSV); documents
  // without one fall back to the surface-form tokenizer.
  std::map<std::string, std::string> word_freq_tables;
};

nlohmann::ordered_json experiment_spec_to_json(const experiment_spec& spec);

// Accepts either {"experiments": [...]} or a bare array.
std::vector<experiment_spec> load_experiment_specs(const std::filesystem::path& path);

struct result_row {
  std::string chapter;
  std::string series;
  double value = 0.0;

  bool operator==(const result_row&) const = default;
};

struct result_table {
  std::vector<result_row> rows;
  std::string spec_echo;  // canonical JSON of the spec that produced it
  std::string options_echo;
  std::string version;
  std::string config_hash;

  bool operator==(const result_table&) const = default;
};

struct study_options {
  ngram_options ngram;
  double alpha = 1.0;   // NBC smoothing
  double c_value = 1.0; // SVM regularization
  double tol = 1e-3;    // SVM KKT tolerance
};

nlohmann::ordered_json study_options_to_json(const study_options& opts);

// Average cosine distance of each chapter to its peers, per n. The final
// unit is the disputed chapter: it never serves as a peer, and its own peers
// are all earlier chapters. Chapters are truncated to the shortest before
// extraction.
result_table run_ngram_intra(const std::vector<document_unit>& units,
                             const std::vector<int>& n_values, const study_options& opts = {},
                             const std::string& name = "ngram_intra");

// Same study with foreign_unit appended as the final chapter (truncation is
// recomputed over the combined set).
result_table run_ngram_substitution(const std::vector<document_unit>& base_units,
                                    const document_unit& foreign_unit,
                                    const std::vector<int>& n_values,
                                    const study_options& opts = {},
                                    const std::string& name = "ngram_substitution");

// Leave-one-chapter-out classification. Per test chapter and feature mode the
// master word list spans training plus that test text; NBC rows report the
// log posterior of the rival class, SVM rows the Platt probability of the
// same-author class, and each score row has a companion `<series>-label` row
// (1 = attributed to the same author).
result_table run_loo_classification(const experiment_spec& spec, const corpus& corp,
                                    const study_options& opts = {});

result_table run_experiment(const experiment_spec& spec, const corpus& corp,
                            const study_options& opts = {});

enum class report_format { csv, json };

std::string render_report(const result_table& table, report_format format);
result_table parse_report_json(const std::string& text);

// Write-to-temp then atomic rename; no partially-written file survives.
void emit_report(const result_table& table, report_format format,
                 const std::filesystem::path& path);

struct written_report {
  std::string experiment;
  std::string group;  // "3-gram" / "nbc-top50"
  std::filesystem::path path;
  result_table table;
};

// Runs every spec, then writes one file per (experiment, group). All tables
// are computed before the first write, so a failing study emits nothing.
std::vector<written_report> run_and_emit(const std::vector<experiment_spec>& specs,
                                         const corpus& corp, const study_options& opts,
                                         const std::filesystem::path& out_dir,
                                         report_format format);

}  // namespace stylo
