#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "stylo/corpus.hpp"
#include "stylo/experiments.hpp"
#include "stylo/features.hpp"

namespace {

struct ingest_config {
  std::string manifest;
};

struct run_config {
  std::string manifest;
  std::string spec;
  std::string out_dir;
  std::string format = "csv";
  std::vector<int> n_values;
  std::vector<std::size_t> top_k;
  double alpha = 1.0;
  double c_value = 1.0;
  double tol = 1e-3;
  bool strip_punctuation = false;
};

int cmd_ingest(const ingest_config& cfg) {
  const stylo::corpus corp = stylo::load_manifest(cfg.manifest);

  std::size_t shortest = 0;
  std::string shortest_id;
  std::cout << "corpus: " << cfg.manifest << "\n";
  std::cout << "documents: " << corp.units.size() << "\n";
  std::cout << std::left << std::setw(16) << "id" << std::setw(16) << "author" << std::setw(16)
            << "work" << std::setw(12) << "role" << std::right << std::setw(12) << "codepoints"
            << std::setw(12) << "vocabulary" << "\n";
  for (const auto& unit : corp.units) {
    const auto tokens = stylo::tokenize_words(unit.text);
    const std::set<std::u32string> vocab(tokens.begin(), tokens.end());
    std::cout << std::left << std::setw(16) << unit.id << std::setw(16) << unit.author
              << std::setw(16) << unit.work << std::setw(12) << stylo::to_string(unit.role)
              << std::right << std::setw(12) << unit.text.size() << std::setw(12) << vocab.size()
              << "\n";
    if (shortest_id.empty() || unit.text.size() < shortest) {
      shortest = unit.text.size();
      shortest_id = unit.id;
    }
  }
  std::cout << "truncation preview: shortest document \"" << shortest_id << "\" has " << shortest
            << " codepoints; gram studies cut every chapter to that length\n";
  return 0;
}

int cmd_run(const run_config& cfg) {
  const stylo::corpus corp = stylo::load_manifest(cfg.manifest);
  std::vector<stylo::experiment_spec> specs = stylo::load_experiment_specs(cfg.spec);

  for (auto& spec : specs) {
    if (!cfg.n_values.empty() && spec.kind != stylo::experiment_kind::loo_classification) {
      spec.n_values = cfg.n_values;
    }
    if (!cfg.top_k.empty() && spec.kind == stylo::experiment_kind::loo_classification) {
      spec.feature_modes = {stylo::feature_mode::all()};
      for (std::size_t k : cfg.top_k) {
        spec.feature_modes.push_back(stylo::feature_mode::top(k));
      }
    }
  }

  stylo::study_options opts;
  opts.ngram.strip_punctuation = cfg.strip_punctuation;
  opts.alpha = cfg.alpha;
  opts.c_value = cfg.c_value;
  opts.tol = cfg.tol;

  const auto format =
      cfg.format == "json" ? stylo::report_format::json : stylo::report_format::csv;
  const auto reports = stylo::run_and_emit(specs, corp, opts, cfg.out_dir, format);

  for (const auto& report : reports) {
    std::cout << "\n== " << report.experiment << " [" << report.group << "] -> "
              << report.path.string() << "\n";
    std::cout << std::left << std::setw(16) << "chapter" << std::setw(20) << "series"
              << std::right << std::setw(12) << "value" << "\n";
    char value[32];
    for (const auto& row : report.table.rows) {
      std::snprintf(value, sizeof value, "%.4f", row.value);
      std::cout << std::left << std::setw(16) << row.chapter << std::setw(20) << row.series
                << std::right << std::setw(12) << value << "\n";
    }
  }
  std::cout << "\nwrote " << reports.size() << " result file" << (reports.size() == 1 ? "" : "s")
            << " to " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylometric authorship analysis over plain-text corpora"};
  app.set_version_flag("--version", std::string(stylo::toolkit_version));
  app.require_subcommand(1);

  ingest_config ingest;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "validate a corpus manifest and summarize it");
  ingest_cmd->add_option("--manifest", ingest.manifest, "corpus manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  run_config run;
  CLI::App* run_cmd = app.add_subcommand("run", "execute the studies described by a spec file");
  run_cmd->add_option("--manifest", run.manifest, "corpus manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--spec", run.spec, "experiment spec file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run.out_dir, "output directory for result files")->required();
  run_cmd->add_option("--format", run.format, "result file format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--n", run.n_values, "gram lengths override, e.g. 2,3,4")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--top-k", run.top_k, "most-common-word counts override, e.g. 50,75,100")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--alpha", run.alpha, "naive Bayes smoothing constant")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--C", run.c_value, "SVM regularization constant")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--tol", run.tol, "SVM KKT tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--strip-punctuation", run.strip_punctuation,
                    "drop punctuation from the gram stream (whitespace is always dropped)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ingest_cmd->parsed()) {
      return cmd_ingest(ingest);
    }
    return cmd_run(run);
  } catch (const stylo::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == stylo::errc::non_convergence ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
