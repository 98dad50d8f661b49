#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "stylo/classify.hpp"
#include "stylo/corpus.hpp"
#include "stylo/features.hpp"

// Set by each test binary's main() so helpers can locate sibling executables.
extern const char* g_argv0;

namespace testsup {

class tmp_dir {
 public:
  tmp_dir();
  ~tmp_dir();
  tmp_dir(const tmp_dir&) = delete;
  tmp_dir& operator=(const tmp_dir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Path of the stylo CLI binary: $STYLO_CLI_BIN if set, otherwise a sibling of
// the running test binary. Empty if neither exists.
std::filesystem::path cli_binary_path();

struct command_result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

command_result run_command(const std::string& command);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// --- synthetic corpora -------------------------------------------------------

// A vocabulary with a heavy-tailed sampling distribution over words built
// from one letter repertoire.
struct synth_author {
  std::string label;
  std::string work;
  std::vector<std::u32string> words;
  std::vector<double> cumulative;  // ascending, ends at 1
};

synth_author make_author(const std::string& label, const std::string& work, char32_t alphabet_base,
                         std::size_t alphabet_size, std::size_t n_function, std::size_t n_content,
                         std::uint64_t seed);

stylo::document_unit make_chapter(const synth_author& author, const std::string& id,
                                  stylo::doc_role role, std::size_t target_codepoints,
                                  std::mt19937_64& rng);

// Greek-lettered author A (8 chapters, ids a.1..a.8) against Latin-lettered
// author B (7 chapters, ids b.1..b.7): disjoint alphabets and disjoint
// function-word distributions.
stylo::corpus make_two_author_corpus(std::uint64_t seed, std::size_t chapters_a,
                                     std::size_t chapters_b, std::size_t target_codepoints);

stylo::corpus make_single_author_corpus(std::uint64_t seed, std::size_t chapters,
                                        std::size_t target_codepoints);

// Writes one UTF-8 text file per unit plus manifest.json; returns the
// manifest path.
std::filesystem::path write_corpus_files(const stylo::corpus& corp,
                                         const std::filesystem::path& dir);

// --- oracles -----------------------------------------------------------------

// Long-double, linear-domain evaluation of the smoothed multinomial
// posterior; independent of the log-domain implementation it checks.
std::vector<double> nbc_brute_force_log_posterior(const std::vector<std::vector<double>>& docs,
                                                  const std::vector<std::string>& labels,
                                                  double alpha, const std::vector<double>& test);

struct nbc_instance {
  std::vector<std::vector<double>> docs;
  std::vector<std::string> labels;
  double alpha = 1.0;
  std::vector<double> test;
};

nbc_instance random_nbc_instance(std::mt19937_64& rng);

// Regularized sigmoid log-loss with smoothed targets; long-double reference.
double platt_loss_ref(const std::vector<double>& decisions, const std::vector<int>& labels,
                      double a, double b);

struct platt_grid_fit {
  double a = 0.0;
  double b = 0.0;
  double loss = 0.0;
};

// Zooming grid search over (a, b); slow but has no shared code with the
// Newton fit.
platt_grid_fit platt_grid_minimize(const std::vector<double>& decisions,
                                   const std::vector<int>& labels);

// Convenience builders.
stylo::feature_space_ptr make_space(const std::vector<std::string>& utf8_keys);
stylo::feature_vector make_vector(stylo::feature_space_ptr space, std::vector<double> values);

}  // namespace testsup
