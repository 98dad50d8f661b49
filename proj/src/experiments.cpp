#include "stylo/experiments.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stylo/numeric.hpp"
#include "stylo/unicode.hpp"

namespace stylo {

std::string_view to_string(experiment_kind k) {
  switch (k) {
    case experiment_kind::ngram_intra: return "ngram_intra";
    case experiment_kind::ngram_substitution: return "ngram_substitution";
    case experiment_kind::loo_classification: return "loo_classification";
  }
  return "ngram_intra";
}

std::string_view to_string(classifier_kind k) {
  return k == classifier_kind::nbc ? "nbc" : "svm";
}

std::string feature_mode::label() const {
  return all_words ? "all" : "top" + std::to_string(top_k);
}

namespace {

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

nlohmann::ordered_json feature_modes_to_json(const std::vector<feature_mode>& modes) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& m : modes) {
    if (m.all_words) {
      arr.push_back("all_words");
    } else {
      arr.push_back(nlohmann::ordered_json{{"top_k", m.top_k}});
    }
  }
  return arr;
}

void finalize_metadata(result_table& table, nlohmann::ordered_json spec_json,
                       const study_options& opts) {
  table.spec_echo = spec_json.dump();
  table.options_echo = study_options_to_json(opts).dump();
  table.version = std::string(toolkit_version);
  table.config_hash =
      hash_hex(fnv1a64(table.spec_echo + "\n" + table.options_echo + "\n" + table.version));
}

}  // namespace

nlohmann::ordered_json experiment_spec_to_json(const experiment_spec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.kind != experiment_kind::loo_classification) {
    j["n_values"] = spec.n_values;
    j["target_work"] = spec.target_work;
    if (spec.kind == experiment_kind::ngram_substitution) {
      j["foreign_chapter"] = spec.foreign_chapter;
    }
  } else {
    j["classifier"] = std::string(to_string(spec.classifier));
    j["feature_modes"] = feature_modes_to_json(spec.feature_modes);
    j["target_work"] = spec.target_work;
    j["self_train"] = spec.self_train;
    j["rival_train"] = spec.rival_train;
    j["word_freq_tables"] = spec.word_freq_tables;
  }
  return j;
}

nlohmann::ordered_json study_options_to_json(const study_options& opts) {
  nlohmann::ordered_json j;
  j["strip_punctuation"] = opts.ngram.strip_punctuation;
  j["alpha"] = opts.alpha;
  j["C"] = opts.c_value;
  j["tol"] = opts.tol;
  return j;
}

// --- spec files -------------------------------------------------------------

namespace {

feature_mode parse_feature_mode(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "all_words" || s == "all") return feature_mode::all();
    fail(errc::malformed_spec, where + ": unknown feature mode \"" + s + "\"");
  }
  if (j.is_object() && j.contains("top_k") && j["top_k"].is_number_unsigned() &&
      j["top_k"].get<std::size_t>() >= 1) {
    return feature_mode::top(j["top_k"].get<std::size_t>());
  }
  fail(errc::malformed_spec, where + ": feature mode must be \"all_words\" or {\"top_k\": k>=1}");
}

std::vector<std::string> parse_id_list(const nlohmann::json& parent, const char* key,
                                       const std::string& where, bool required) {
  auto it = parent.find(key);
  if (it == parent.end()) {
    if (required) fail(errc::malformed_spec, where + ": missing \"" + key + "\"");
    return {};
  }
  if (!it->is_array()) fail(errc::malformed_spec, where + ": \"" + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) fail(errc::malformed_spec, where + ": \"" + key + "\" entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

experiment_spec parse_experiment(const nlohmann::json& j, std::size_t index,
                                 const std::filesystem::path& base) {
  const std::string where = "experiments[" + std::to_string(index) + "]";
  if (!j.is_object()) fail(errc::malformed_spec, where + ": must be an object");

  experiment_spec spec;
  const std::string kind = j.value("kind", std::string());
  if (kind == "ngram_intra") {
    spec.kind = experiment_kind::ngram_intra;
  } else if (kind == "ngram_substitution") {
    spec.kind = experiment_kind::ngram_substitution;
  } else if (kind == "loo_classification") {
    spec.kind = experiment_kind::loo_classification;
  } else {
    fail(errc::malformed_spec, where + ": unknown kind \"" + kind + "\"");
  }
  spec.name = j.value("name", kind + "-" + std::to_string(index));

  if (spec.kind != experiment_kind::loo_classification) {
    if (auto it = j.find("n_values"); it != j.end()) {
      if (!it->is_array() || it->empty()) {
        fail(errc::malformed_spec, where + ": \"n_values\" must be a non-empty array");
      }
      for (const auto& v : *it) {
        if (!v.is_number_integer() || v.get<int>() < 1) {
          fail(errc::malformed_spec, where + ": n values must be integers >= 1");
        }
        spec.n_values.push_back(v.get<int>());
      }
    } else {
      spec.n_values = {2, 3, 4};
    }
    spec.target_work = parse_id_list(j, "target_work", where, true);
    if (spec.kind == experiment_kind::ngram_substitution) {
      if (!j.contains("foreign_chapter") || !j["foreign_chapter"].is_string()) {
        fail(errc::malformed_spec, where + ": missing \"foreign_chapter\"");
      }
      spec.foreign_chapter = j["foreign_chapter"].get<std::string>();
    }
  } else {
    const std::string cls = j.value("classifier", std::string());
    if (cls == "nbc") {
      spec.classifier = classifier_kind::nbc;
    } else if (cls == "svm") {
      spec.classifier = classifier_kind::svm;
    } else {
      fail(errc::malformed_spec, where + ": classifier must be \"nbc\" or \"svm\"");
    }
    if (auto it = j.find("feature_modes"); it != j.end()) {
      if (!it->is_array() || it->empty()) {
        fail(errc::malformed_spec, where + ": \"feature_modes\" must be a non-empty array");
      }
      for (const auto& m : *it) {
        spec.feature_modes.push_back(parse_feature_mode(m, where));
      }
    } else {
      spec.feature_modes = {feature_mode::all(), feature_mode::top(50), feature_mode::top(75),
                            feature_mode::top(100)};
    }
    spec.target_work = parse_id_list(j, "target_work", where, true);
    spec.self_train = parse_id_list(j, "self_train", where, false);
    spec.rival_train = parse_id_list(j, "rival_train", where, true);
    if (auto it = j.find("word_freq_tables"); it != j.end()) {
      if (!it->is_object()) {
        fail(errc::malformed_spec, where + ": \"word_freq_tables\" must map ids to paths");
      }
      for (const auto& [id, value] : it->items()) {
        if (!value.is_string()) {
          fail(errc::malformed_spec, where + ": \"word_freq_tables\" values must be strings");
        }
        std::filesystem::path p = value.get<std::string>();
        if (p.is_relative()) p = base / p;
        spec.word_freq_tables[id] = p.string();
      }
    }
  }
  return spec;
}

}  // namespace

std::vector<experiment_spec> load_experiment_specs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(errc::missing_file, "experiment spec: cannot open \"" + path.string() + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::malformed_spec, "\"" + path.string() + "\": " + e.what());
  }

  const nlohmann::json* list = nullptr;
  if (doc.is_array()) {
    list = &doc;
  } else if (doc.is_object() && doc.contains("experiments") && doc["experiments"].is_array()) {
    list = &doc["experiments"];
  } else {
    fail(errc::malformed_spec,
         "\"" + path.string() + "\": expected an array or {\"experiments\": [...]}");
  }
  if (list->empty()) {
    fail(errc::malformed_spec, "\"" + path.string() + "\": no experiments defined");
  }

  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : ".";
  std::vector<experiment_spec> specs;
  for (std::size_t i = 0; i < list->size(); ++i) {
    specs.push_back(parse_experiment((*list)[i], i, base));
  }
  return specs;
}

// --- N-gram studies ---------------------------------------------------------

namespace {

result_table run_ngram_core(const std::vector<document_unit>& units,
                            const std::vector<int>& n_values, const study_options& opts,
                            nlohmann::ordered_json spec_json) {
  if (units.size() < 3) {
    fail(errc::bad_argument, "ngram study: need at least 3 chapters");
  }
  if (n_values.empty()) {
    fail(errc::bad_argument, "ngram study: no n values");
  }

  const std::vector<document_unit> truncated = truncate_to_shortest(units);
  const std::size_t count = truncated.size();

  result_table table;
  for (int n : n_values) {
    std::vector<ngram_count_table> counts;
    counts.reserve(count);
    for (const auto& u : truncated) {
      counts.push_back(extract_ngram_counts(u.text, n, opts.ngram));
      if (counts.back().total == 0) {
        fail(errc::zero_total, "chapter \"" + u.id + "\": fewer than " + std::to_string(n) +
                                   " codepoints after truncation and whitespace removal");
      }
    }
    const feature_space_ptr space = build_master_list(counts);
    std::vector<feature_vector> vectors;
    vectors.reserve(count);
    for (const auto& c : counts) {
      vectors.push_back(vectorize_relative(c, space));
    }

    std::vector<std::string> ids;
    for (const auto& u : truncated) ids.push_back(u.id);
    const distance_matrix dist = build_distance_matrix(std::move(ids), vectors);

    const std::string series = std::to_string(n) + "-gram";
    // The last chapter is the one under scrutiny: it never serves as a peer,
    // and its own average runs over every earlier chapter.
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> distances;
      for (std::size_t j = 0; j + 1 < count; ++j) {
        if (j == i) continue;
        distances.push_back(dist.values[i][j]);
      }
      const double avg = kahan_sum(distances) / static_cast<double>(distances.size());
      table.rows.push_back({truncated[i].id, series, avg});
    }
  }

  finalize_metadata(table, std::move(spec_json), opts);
  return table;
}

}  // namespace

result_table run_ngram_intra(const std::vector<document_unit>& units,
                             const std::vector<int>& n_values, const study_options& opts,
                             const std::string& name) {
  nlohmann::ordered_json spec_json;
  spec_json["name"] = name;
  spec_json["kind"] = "ngram_intra";
  spec_json["n_values"] = n_values;
  nlohmann::ordered_json ids = nlohmann::ordered_json::array();
  for (const auto& u : units) ids.push_back(u.id);
  spec_json["target_work"] = std::move(ids);
  return run_ngram_core(units, n_values, opts, std::move(spec_json));
}

result_table run_ngram_substitution(const std::vector<document_unit>& base_units,
                                    const document_unit& foreign_unit,
                                    const std::vector<int>& n_values, const study_options& opts,
                                    const std::string& name) {
  if (base_units.size() < 2) {
    fail(errc::bad_argument, "ngram substitution: need at least 2 base chapters");
  }
  std::vector<document_unit> combined = base_units;
  combined.push_back(foreign_unit);

  nlohmann::ordered_json spec_json;
  spec_json["name"] = name;
  spec_json["kind"] = "ngram_substitution";
  spec_json["n_values"] = n_values;
  nlohmann::ordered_json ids = nlohmann::ordered_json::array();
  for (const auto& u : base_units) ids.push_back(u.id);
  spec_json["target_work"] = std::move(ids);
  spec_json["foreign_chapter"] = foreign_unit.id;
  return run_ngram_core(combined, n_values, opts, std::move(spec_json));
}

// --- leave-one-chapter-out classification ------------------------------------

namespace {

word_frequency_table document_word_table(const experiment_spec& spec, const document_unit& doc) {
  if (auto it = spec.word_freq_tables.find(doc.id); it != spec.word_freq_tables.end()) {
    return load_word_freq_table(it->second);
  }
  const std::vector<std::u32string> tokens = tokenize_words(doc.text);
  if (tokens.empty()) {
    fail(errc::empty_input,
         "document \"" + doc.id + "\": no word tokens for the frequency fallback");
  }
  return word_freq_per_10k(tokens);
}

struct loo_cell {
  double score = 0.0;  // nbc: log posterior of rival; svm: P(same author)
  bool same_author = false;
};

loo_cell run_loo_cell(const experiment_spec& spec, const study_options& opts,
                      const std::vector<const word_frequency_table*>& self_tables,
                      const std::vector<const word_frequency_table*>& rival_tables,
                      const word_frequency_table& test_table, const feature_mode& mode,
                      const std::string& test_id) {
  std::vector<word_frequency_table> pool;
  pool.reserve(self_tables.size() + rival_tables.size() + 1);
  for (const auto* t : self_tables) pool.push_back(*t);
  for (const auto* t : rival_tables) pool.push_back(*t);
  pool.push_back(test_table);

  feature_space_ptr space;
  if (mode.all_words) {
    space = build_master_list(pool);
  } else {
    space = select_top_n(pool, mode.top_k);
  }

  std::vector<feature_vector> train;
  std::vector<std::string> nbc_labels;
  std::vector<int> svm_labels;
  for (const auto* t : self_tables) {
    train.push_back(vectorize_word_freqs(*t, space));
    nbc_labels.emplace_back("self");
    svm_labels.push_back(1);
  }
  for (const auto* t : rival_tables) {
    train.push_back(vectorize_word_freqs(*t, space));
    nbc_labels.emplace_back("rival");
    svm_labels.push_back(-1);
  }
  const feature_vector test_vec = vectorize_word_freqs(test_table, space);

  loo_cell cell;
  if (spec.classifier == classifier_kind::nbc) {
    const nbc_model model = nbc_train(train, nbc_labels, opts.alpha);
    const std::vector<double> lp = nbc_predict_log_proba(model, test_vec);
    const std::size_t self_idx =
        static_cast<std::size_t>(std::find(model.classes.begin(), model.classes.end(), "self") -
                                 model.classes.begin());
    const std::size_t rival_idx = 1 - self_idx;
    cell.score = lp[rival_idx];
    cell.same_author = lp[self_idx] >= lp[rival_idx];
  } else {
    const min_max_scaler scaler = min_max_scaler::fit(train);
    std::vector<feature_vector> scaled;
    scaled.reserve(train.size());
    for (const auto& v : train) scaled.push_back(scaler.transform(v));

    svm_model model = svm_train(scaled, svm_labels, {opts.c_value, opts.tol});
    std::vector<double> decisions;
    decisions.reserve(scaled.size());
    for (const auto& v : scaled) decisions.push_back(svm_decision(model, v));
    model.platt = platt_fit(decisions, svm_labels);
    if (model.platt.degenerate) {
      std::cerr << "warning: constant decision values for chapter \"" << test_id << "\" ("
                << mode.label() << "); probability falls back to the smoothed class rate\n";
    }

    const double p_self = svm_predict_proba(model, scaler.transform(test_vec));
    cell.score = p_self;
    cell.same_author = p_self >= 0.5;
  }
  return cell;
}

}  // namespace

result_table run_loo_classification(const experiment_spec& spec, const corpus& corp,
                                    const study_options& opts) {
  if (spec.target_work.empty()) {
    fail(errc::bad_argument, "loo study: empty target_work");
  }
  if (spec.rival_train.empty()) {
    fail(errc::bad_argument, "loo study: empty rival_train");
  }
  if (spec.feature_modes.empty()) {
    fail(errc::bad_argument, "loo study: no feature modes");
  }

  const std::set<std::string> target_set(spec.target_work.begin(), spec.target_work.end());
  const std::set<std::string> self_set(spec.self_train.begin(), spec.self_train.end());
  for (const auto& id : spec.rival_train) {
    if (target_set.count(id) || self_set.count(id)) {
      fail(errc::bad_argument, "loo study: \"" + id + "\" cannot be both rival and same-author");
    }
  }
  if (spec.self_train.empty() && spec.target_work.size() < 2) {
    fail(errc::bad_argument,
         "loo study: need a separate self_train set or at least 2 target chapters");
  }

  // Resolve and cache one frequency table per involved document.
  std::unordered_map<std::string, word_frequency_table> tables;
  auto table_of = [&](const std::string& id) -> const word_frequency_table& {
    auto it = tables.find(id);
    if (it == tables.end()) {
      it = tables.emplace(id, document_word_table(spec, corp.at(id))).first;
    }
    return it->second;
  };
  for (const auto& id : spec.target_work) table_of(id);
  for (const auto& id : spec.self_train) table_of(id);
  for (const auto& id : spec.rival_train) table_of(id);

  const std::string prefix = std::string(to_string(spec.classifier)) + "-";

  result_table table;
  for (const auto& mode : spec.feature_modes) {
    const std::string series = prefix + mode.label();
    std::vector<result_row> labels;
    for (const auto& test_id : spec.target_work) {
      std::vector<const word_frequency_table*> self_tables;
      if (spec.self_train.empty()) {
        for (const auto& id : spec.target_work) {
          if (id != test_id) self_tables.push_back(&table_of(id));
        }
      } else {
        for (const auto& id : spec.self_train) {
          if (id != test_id) self_tables.push_back(&table_of(id));
        }
      }
      if (self_tables.empty()) {
        fail(errc::bad_argument,
             "loo study: no same-author training documents left for \"" + test_id + "\"");
      }
      std::vector<const word_frequency_table*> rival_tables;
      for (const auto& id : spec.rival_train) rival_tables.push_back(&table_of(id));

      const loo_cell cell = run_loo_cell(spec, opts, self_tables, rival_tables, table_of(test_id),
                                         mode, test_id);
      table.rows.push_back({test_id, series, cell.score});
      labels.push_back({test_id, series + "-label", cell.same_author ? 1.0 : 0.0});
    }
    for (auto& row : labels) {
      table.rows.push_back(std::move(row));
    }
  }

  finalize_metadata(table, experiment_spec_to_json(spec), opts);
  return table;
}

result_table run_experiment(const experiment_spec& spec, const corpus& corp,
                            const study_options& opts) {
  switch (spec.kind) {
    case experiment_kind::ngram_intra: {
      std::vector<document_unit> units;
      for (const auto& id : spec.target_work) units.push_back(corp.at(id));
      return run_ngram_intra(units, spec.n_values, opts, spec.name);
    }
    case experiment_kind::ngram_substitution: {
      std::vector<document_unit> units;
      for (const auto& id : spec.target_work) units.push_back(corp.at(id));
      return run_ngram_substitution(units, corp.at(spec.foreign_chapter), spec.n_values, opts,
                                    spec.name);
    }
    case experiment_kind::loo_classification:
      return run_loo_classification(spec, corp, opts);
  }
  fail(errc::bad_argument, "run_experiment: unknown kind");
}

// --- reports ----------------------------------------------------------------

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::ordered_json metadata_json(const result_table& table) {
  nlohmann::ordered_json meta;
  meta["toolkit_version"] = table.version;
  meta["config_hash"] = table.config_hash;
  meta["spec"] = nlohmann::ordered_json::parse(table.spec_echo);
  meta["options"] = nlohmann::ordered_json::parse(table.options_echo);
  return meta;
}

}  // namespace

std::string render_report(const result_table& table, report_format format) {
  if (format == report_format::csv) {
    std::string out = "chapter,series,value\n";
    for (const auto& row : table.rows) {
      out += csv_escape(row.chapter);
      out += ',';
      out += csv_escape(row.series);
      out += ',';
      out += fmt_double(row.value);
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json j;
  j["metadata"] = metadata_json(table);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    rows.push_back(nlohmann::ordered_json{
        {"chapter", row.chapter}, {"series", row.series}, {"value", row.value}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

result_table parse_report_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::malformed_table, std::string("report JSON: ") + e.what());
  }
  result_table table;
  const auto& meta = j.at("metadata");
  table.version = meta.at("toolkit_version").get<std::string>();
  table.config_hash = meta.at("config_hash").get<std::string>();
  table.spec_echo = meta.at("spec").dump();
  table.options_echo = meta.at("options").dump();
  for (const auto& row : j.at("rows")) {
    table.rows.push_back({row.at("chapter").get<std::string>(),
                          row.at("series").get<std::string>(), row.at("value").get<double>()});
  }
  return table;
}

void emit_report(const result_table& table, report_format format,
                 const std::filesystem::path& path) {
  const std::string content = render_report(table, format);

  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(errc::io_failure, "cannot write \"" + tmp.string() + "\"");
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      fail(errc::io_failure, "write failed for \"" + tmp.string() + "\"");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    fail(errc::io_failure, "cannot rename \"" + tmp.string() + "\" to \"" + path.string() + "\"");
  }
}

// --- multi-study execution ---------------------------------------------------

namespace {

std::string sanitize_filename(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  return out.empty() ? std::string("study") : out;
}

std::string group_of(const result_row& row) {
  constexpr std::string_view suffix = "-label";
  if (row.series.size() > suffix.size() &&
      row.series.compare(row.series.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return row.series.substr(0, row.series.size() - suffix.size());
  }
  return row.series;
}

}  // namespace

std::vector<written_report> run_and_emit(const std::vector<experiment_spec>& specs,
                                         const corpus& corp, const study_options& opts,
                                         const std::filesystem::path& out_dir,
                                         report_format format) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    fail(errc::io_failure, "cannot create output directory \"" + out_dir.string() + "\"");
  }

  // Compute everything before writing anything.
  std::vector<written_report> reports;
  std::set<std::string> filenames;
  for (const auto& spec : specs) {
    const result_table full = run_experiment(spec, corp, opts);

    std::vector<std::string> group_order;
    for (const auto& row : full.rows) {
      const std::string g = group_of(row);
      if (std::find(group_order.begin(), group_order.end(), g) == group_order.end()) {
        group_order.push_back(g);
      }
    }

    for (const auto& group : group_order) {
      result_table part;
      part.spec_echo = full.spec_echo;
      part.options_echo = full.options_echo;
      part.version = full.version;
      part.config_hash = full.config_hash;
      for (const auto& row : full.rows) {
        if (group_of(row) == group) part.rows.push_back(row);
      }

      const std::string ext = format == report_format::csv ? ".csv" : ".json";
      const std::string filename = sanitize_filename(spec.name) + "_" + sanitize_filename(group) + ext;
      if (!filenames.insert(filename).second) {
        fail(errc::bad_argument, "output file \"" + filename + "\" produced twice; give the "
                                 "experiments distinct names");
      }
      reports.push_back({spec.name, group, out_dir / filename, std::move(part)});
    }
  }

  for (const auto& r : reports) {
    emit_report(r.table, format, r.path);
  }
  return reports;
}

}  // namespace stylo
