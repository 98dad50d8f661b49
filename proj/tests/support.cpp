#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stylo/unicode.hpp"

const char* g_argv0 = nullptr;

namespace testsup {

tmp_dir::tmp_dir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("stylo-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

tmp_dir::~tmp_dir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path cli_binary_path() {
  if (const char* env = std::getenv("STYLO_CLI_BIN")) {
    std::filesystem::path p = env;
    if (std::filesystem::exists(p)) return p;
  }
  if (g_argv0 != nullptr) {
    const std::filesystem::path self = g_argv0;
    const std::filesystem::path sibling = self.parent_path() / "stylo";
    if (std::filesystem::exists(sibling)) return sibling;
  }
  return {};
}

command_result run_command(const std::string& command) {
  tmp_dir capture;
  const std::filesystem::path out = capture.path() / "out";
  const std::filesystem::path err = capture.path() / "err";
  const std::string full = command + " >" + out.string() + " 2>" + err.string();

  command_result result;
  const int status = std::system(full.c_str());
  if (status >= 0 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.out = read_file(out);
  result.err = read_file(err);
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

// --- synthetic corpora -------------------------------------------------------

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::u32string random_word(std::mt19937_64& rng, char32_t base, std::size_t alphabet_size,
                           std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng() % (max_len - min_len + 1);
  std::u32string word;
  for (std::size_t i = 0; i < len; ++i) {
    word.push_back(base + static_cast<char32_t>(rng() % alphabet_size));
  }
  return word;
}

std::size_t pick_weighted(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double u = unit_uniform(rng);
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

synth_author make_author(const std::string& label, const std::string& work, char32_t alphabet_base,
                         std::size_t alphabet_size, std::size_t n_function, std::size_t n_content,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  synth_author author;
  author.label = label;
  author.work = work;

  std::set<std::u32string> seen;
  while (author.words.size() < n_function) {
    auto w = random_word(rng, alphabet_base, alphabet_size, 2, 4);
    if (seen.insert(w).second) author.words.push_back(std::move(w));
  }
  while (author.words.size() < n_function + n_content) {
    auto w = random_word(rng, alphabet_base, alphabet_size, 4, 8);
    if (seen.insert(w).second) author.words.push_back(std::move(w));
  }

  // Half the token mass goes to the short "function" words (Zipf-ish), half
  // to the longer content vocabulary.
  std::vector<double> weights(author.words.size(), 0.0);
  double function_total = 0.0;
  double content_total = 0.0;
  for (std::size_t r = 0; r < n_function; ++r) {
    weights[r] = 1.0 / static_cast<double>(r + 1);
    function_total += weights[r];
  }
  for (std::size_t r = 0; r < n_content; ++r) {
    weights[n_function + r] = 1.0 / static_cast<double>(10 + r);
    content_total += weights[n_function + r];
  }
  for (std::size_t r = 0; r < n_function; ++r) weights[r] *= 0.5 / function_total;
  for (std::size_t r = 0; r < n_content; ++r) weights[n_function + r] *= 0.5 / content_total;

  author.cumulative.resize(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    author.cumulative[i] = acc;
  }
  author.cumulative.back() = 1.0;
  return author;
}

stylo::document_unit make_chapter(const synth_author& author, const std::string& id,
                                  stylo::doc_role role, std::size_t target_codepoints,
                                  std::mt19937_64& rng) {
  stylo::document_unit unit;
  unit.id = id;
  unit.author = author.label;
  unit.work = author.work;
  unit.role = role;
  while (unit.text.size() < target_codepoints) {
    if (!unit.text.empty()) unit.text.push_back(U' ');
    unit.text += author.words[pick_weighted(rng, author.cumulative)];
  }
  return unit;
}

stylo::corpus make_two_author_corpus(std::uint64_t seed, std::size_t chapters_a,
                                     std::size_t chapters_b, std::size_t target_codepoints) {
  const synth_author a = make_author("AuthorA", "WorkA", U'α', 24, 40, 60, seed * 2654435761u + 1);
  const synth_author b = make_author("AuthorB", "WorkB", U'a', 24, 40, 60, seed * 2654435761u + 2);

  std::mt19937_64 rng(seed);
  stylo::corpus corp;
  for (std::size_t i = 1; i <= chapters_a; ++i) {
    corp.units.push_back(
        make_chapter(a, "a." + std::to_string(i), stylo::doc_role::test, target_codepoints, rng));
  }
  for (std::size_t i = 1; i <= chapters_b; ++i) {
    corp.units.push_back(
        make_chapter(b, "b." + std::to_string(i), stylo::doc_role::train, target_codepoints, rng));
  }
  return corp;
}

stylo::corpus make_single_author_corpus(std::uint64_t seed, std::size_t chapters,
                                        std::size_t target_codepoints) {
  const synth_author a = make_author("AuthorA", "WorkA", U'α', 24, 40, 60, seed * 2654435761u + 1);
  std::mt19937_64 rng(seed);
  stylo::corpus corp;
  for (std::size_t i = 1; i <= chapters; ++i) {
    corp.units.push_back(
        make_chapter(a, "a." + std::to_string(i), stylo::doc_role::test, target_codepoints, rng));
  }
  return corp;
}

std::filesystem::path write_corpus_files(const stylo::corpus& corp,
                                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["normalization"] = "nfc_preserve_diacritics";
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& unit : corp.units) {
    std::string filename = unit.id + ".txt";
    for (char& c : filename) {
      if (c == '/' || c == '\\') c = '_';
    }
    write_file(dir / filename, stylo::uni::encode_utf8(unit.text));
    docs.push_back(nlohmann::ordered_json{{"id", unit.id},
                                          {"author", unit.author},
                                          {"work", unit.work},
                                          {"role", std::string(stylo::to_string(unit.role))},
                                          {"path", filename}});
  }
  manifest["documents"] = std::move(docs);
  const std::filesystem::path path = dir / "manifest.json";
  write_file(path, manifest.dump(2) + "\n");
  return path;
}

// --- oracles -----------------------------------------------------------------

std::vector<double> nbc_brute_force_log_posterior(const std::vector<std::vector<double>>& docs,
                                                  const std::vector<std::string>& labels,
                                                  double alpha, const std::vector<double>& test) {
  std::vector<std::string> classes;
  for (const auto& label : labels) {
    if (std::find(classes.begin(), classes.end(), label) == classes.end()) {
      classes.push_back(label);
    }
  }
  const std::size_t dim = test.size();

  std::vector<long double> posterior(classes.size(), 0.0L);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    long double doc_count = 0.0L;
    std::vector<long double> sums(dim, 0.0L);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      if (labels[i] != classes[c]) continue;
      doc_count += 1.0L;
      for (std::size_t j = 0; j < dim; ++j) {
        sums[j] += static_cast<long double>(docs[i][j]);
      }
    }
    long double class_total = 0.0L;
    for (long double s : sums) class_total += s;

    long double prob = doc_count / static_cast<long double>(docs.size());
    const long double denom = class_total + static_cast<long double>(alpha) * dim;
    for (std::size_t j = 0; j < dim; ++j) {
      const long double p = (sums[j] + static_cast<long double>(alpha)) / denom;
      prob *= powl(p, static_cast<long double>(test[j]));
    }
    posterior[c] = prob;
  }

  long double total = 0.0L;
  for (long double p : posterior) total += p;
  std::vector<double> out(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    out[c] = static_cast<double>(logl(posterior[c] / total));
  }
  return out;
}

nbc_instance random_nbc_instance(std::mt19937_64& rng) {
  nbc_instance inst;
  const std::size_t dim = 1 + rng() % 5;
  const std::size_t docs_a = 1 + rng() % 4;
  const std::size_t docs_b = 1 + rng() % 4;
  inst.alpha = 0.1 + 2.9 * unit_uniform(rng);

  const auto random_doc = [&] {
    std::vector<double> doc(dim);
    for (auto& x : doc) {
      x = 20.0 * unit_uniform(rng);
      if (rng() % 4 == 0) x = 0.0;  // sparse entries are the common case
    }
    return doc;
  };
  for (std::size_t i = 0; i < docs_a; ++i) {
    inst.docs.push_back(random_doc());
    inst.labels.emplace_back("A");
  }
  for (std::size_t i = 0; i < docs_b; ++i) {
    inst.docs.push_back(random_doc());
    inst.labels.emplace_back("B");
  }
  inst.test = random_doc();
  return inst;
}

double platt_loss_ref(const std::vector<double>& decisions, const std::vector<int>& labels,
                      double a, double b) {
  long double n_pos = 0.0L;
  long double n_neg = 0.0L;
  for (int y : labels) {
    (y == 1 ? n_pos : n_neg) += 1.0L;
  }
  const long double t_pos = (n_pos + 1.0L) / (n_pos + 2.0L);
  const long double t_neg = 1.0L / (n_neg + 2.0L);

  long double total = 0.0L;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const long double t = labels[i] == 1 ? t_pos : t_neg;
    const long double z = static_cast<long double>(a) * decisions[i] + static_cast<long double>(b);
    if (z >= 0.0L) {
      total += t * z + log1pl(expl(-z));
    } else {
      total += (t - 1.0L) * z + log1pl(expl(z));
    }
  }
  return static_cast<double>(total);
}

platt_grid_fit platt_grid_minimize(const std::vector<double>& decisions,
                                   const std::vector<int>& labels) {
  platt_grid_fit best{0.0, 0.0, platt_loss_ref(decisions, labels, 0.0, 0.0)};
  double span_a = 40.0;
  double span_b = 20.0;
  constexpr int points = 41;
  for (int level = 0; level < 8; ++level) {
    const double center_a = best.a;
    const double center_b = best.b;
    for (int i = 0; i < points; ++i) {
      const double a = center_a - span_a + 2.0 * span_a * i / (points - 1);
      for (int j = 0; j < points; ++j) {
        const double b = center_b - span_b + 2.0 * span_b * j / (points - 1);
        const double loss = platt_loss_ref(decisions, labels, a, b);
        if (loss < best.loss) {
          best = {a, b, loss};
        }
      }
    }
    span_a *= 0.12;
    span_b *= 0.12;
  }
  return best;
}

stylo::feature_space_ptr make_space(const std::vector<std::string>& utf8_keys) {
  std::vector<std::u32string> keys;
  keys.reserve(utf8_keys.size());
  for (const auto& k : utf8_keys) {
    keys.push_back(stylo::uni::decode_utf8(k));
  }
  return std::make_shared<stylo::feature_space>(std::move(keys));
}

stylo::feature_vector make_vector(stylo::feature_space_ptr space, std::vector<double> values) {
  stylo::feature_vector v;
  v.space = std::move(space);
  v.values = std::move(values);
  return v;
}

}  // namespace testsup
