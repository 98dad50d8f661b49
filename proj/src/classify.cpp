#include "stylo/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stylo/numeric.hpp"

namespace stylo {

namespace {

void check_training_input(const std::vector<feature_vector>& vectors,
                          std::size_t label_count, const char* who) {
  if (vectors.empty()) {
    fail(errc::empty_input, std::string(who) + ": no training vectors");
  }
  if (vectors.size() != label_count) {
    fail(errc::bad_argument, std::string(who) + ": vectors/labels size mismatch");
  }
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    require_same_space(vectors[0], vectors[i]);
  }
}

}  // namespace

nbc_model nbc_train(const std::vector<feature_vector>& vectors,
                    const std::vector<std::string>& labels, double alpha) {
  check_training_input(vectors, labels.size(), "nbc_train");
  if (!(alpha > 0.0)) {
    fail(errc::bad_argument, "nbc_train: alpha must be > 0");
  }

  nbc_model model;
  model.space = vectors.front().space;
  model.alpha = alpha;

  std::vector<std::size_t> class_of(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(model.classes.begin(), model.classes.end(), labels[i]);
    if (it == model.classes.end()) {
      model.classes.push_back(labels[i]);
      class_of[i] = model.classes.size() - 1;
    } else {
      class_of[i] = static_cast<std::size_t>(it - model.classes.begin());
    }
  }
  if (model.classes.size() < 2) {
    fail(errc::single_class, "nbc_train: need at least two classes");
  }

  const std::size_t n_classes = model.classes.size();
  const std::size_t dim = model.space->size();
  std::vector<std::vector<double>> feature_sums(n_classes, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> doc_counts(n_classes, 0);

  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const std::size_t c = class_of[i];
    ++doc_counts[c];
    for (std::size_t j = 0; j < dim; ++j) {
      const double x = vectors[i].values[j];
      if (x < 0.0 || !std::isfinite(x)) {
        fail(errc::bad_argument, "nbc_train: feature values must be finite and non-negative");
      }
      feature_sums[c][j] += x;
    }
  }

  model.log_priors.resize(n_classes);
  model.log_likelihoods.assign(n_classes, std::vector<double>(dim, 0.0));
  for (std::size_t c = 0; c < n_classes; ++c) {
    model.log_priors[c] =
        std::log(static_cast<double>(doc_counts[c])) - std::log(static_cast<double>(vectors.size()));
    const double class_total = kahan_sum(feature_sums[c]);
    const double denom = std::log(class_total + alpha * static_cast<double>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      model.log_likelihoods[c][j] = std::log(feature_sums[c][j] + alpha) - denom;
    }
  }
  return model;
}

std::vector<double> nbc_predict_log_proba(const nbc_model& model, const feature_vector& v) {
  require_space(v, model.space);
  for (double x : v.values) {
    if (x < 0.0 || !std::isfinite(x)) {
      fail(errc::bad_argument, "nbc_predict_log_proba: feature values must be finite and non-negative");
    }
  }

  const std::size_t n_classes = model.classes.size();
  std::vector<double> scores(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    scores[c] = model.log_priors[c] + kahan_dot(v.values, model.log_likelihoods[c]);
  }

  // log-sum-exp normalization
  const double peak = *std::max_element(scores.begin(), scores.end());
  std::vector<double> shifted(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    shifted[c] = std::exp(scores[c] - peak);
  }
  const double lse = peak + std::log(kahan_sum(shifted));
  for (double& s : scores) {
    s -= lse;
  }
  return scores;
}

// ---------------------------------------------------------------------------
// Linear SVM, dual formulation:
//   min 1/2 a'Qa - sum(a)  s.t.  0 <= a_i <= C,  sum(y_i a_i) = 0
// with Q_ij = y_i y_j <x_i, x_j>. Each round updates the maximal violating
// pair; ties break on the lowest index, so runs are reproducible.
// ---------------------------------------------------------------------------

namespace {

struct pair_selection {
  std::ptrdiff_t up = -1;
  std::ptrdiff_t low = -1;
  double m_up = -std::numeric_limits<double>::infinity();
  double m_low = std::numeric_limits<double>::infinity();

  double gap() const { return m_up - m_low; }
};

pair_selection select_violating_pair(const std::vector<double>& alpha,
                                     const std::vector<double>& grad,
                                     const std::vector<int>& y, double c_value) {
  pair_selection sel;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double v = -static_cast<double>(y[i]) * grad[i];
    const bool in_up = (y[i] > 0 && alpha[i] < c_value) || (y[i] < 0 && alpha[i] > 0.0);
    const bool in_low = (y[i] > 0 && alpha[i] > 0.0) || (y[i] < 0 && alpha[i] < c_value);
    if (in_up && v > sel.m_up) {
      sel.m_up = v;
      sel.up = static_cast<std::ptrdiff_t>(i);
    }
    if (in_low && v < sel.m_low) {
      sel.m_low = v;
      sel.low = static_cast<std::ptrdiff_t>(i);
    }
  }
  return sel;
}

}  // namespace

svm_model svm_train(const std::vector<feature_vector>& vectors, const std::vector<int>& labels,
                    const svm_train_options& opts) {
  check_training_input(vectors, labels.size(), "svm_train");
  if (!(opts.c_value > 0.0)) {
    fail(errc::bad_argument, "svm_train: C must be > 0");
  }
  if (!(opts.tol > 0.0)) {
    fail(errc::bad_argument, "svm_train: tol must be > 0");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int y : labels) {
    if (y == 1) {
      has_pos = true;
    } else if (y == -1) {
      has_neg = true;
    } else {
      fail(errc::bad_argument, "svm_train: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    fail(errc::single_class, "svm_train: both classes must be present");
  }

  const std::size_t n = vectors.size();
  const double c_value = opts.c_value;

  std::vector<std::vector<double>> kernel(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = kahan_dot(vectors[i].values, vectors[j].values);
      kernel[i][j] = k;
      kernel[j][i] = k;
    }
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of the dual objective at alpha = 0

  constexpr double curvature_floor = 1e-12;
  pair_selection sel;
  std::size_t iter = 0;
  for (;; ++iter) {
    sel = select_violating_pair(alpha, grad, labels, c_value);
    if (sel.up < 0 || sel.low < 0 || sel.gap() <= opts.tol) {
      break;
    }
    if (iter >= opts.max_iter) {
      fail(errc::non_convergence,
           "svm_train: no convergence after " + std::to_string(opts.max_iter) +
               " pair updates; max KKT violation " + std::to_string(sel.gap()));
    }

    const auto i = static_cast<std::size_t>(sel.up);
    const auto j = static_cast<std::size_t>(sel.low);
    const double yi = labels[i];
    const double yj = labels[j];

    // Move along (da_i, da_j) = (y_i, -y_j) * t, which preserves sum(y a).
    double curvature = kernel[i][i] + kernel[j][j] - 2.0 * kernel[i][j];
    curvature = std::max(curvature, curvature_floor);
    double step = (yi * grad[i] - yj * grad[j]) / -curvature;

    const double lo_i = yi > 0 ? -alpha[i] : alpha[i] - c_value;
    const double hi_i = yi > 0 ? c_value - alpha[i] : alpha[i];
    const double lo_j = yj > 0 ? alpha[j] - c_value : -alpha[j];
    const double hi_j = yj > 0 ? alpha[j] : c_value - alpha[j];
    step = std::clamp(step, std::max(lo_i, lo_j), std::min(hi_i, hi_j));

    const double new_i = std::clamp(alpha[i] + yi * step, 0.0, c_value);
    const double new_j = std::clamp(alpha[j] - yj * step, 0.0, c_value);
    const double delta_i = new_i - alpha[i];
    const double delta_j = new_j - alpha[j];
    alpha[i] = new_i;
    alpha[j] = new_j;

    for (std::size_t k = 0; k < n; ++k) {
      const double yk = labels[k];
      grad[k] += yk * yi * kernel[k][i] * delta_i + yk * yj * kernel[k][j] * delta_j;
    }
  }

  svm_model model;
  model.space = vectors.front().space;
  model.c_value = c_value;
  model.dual_coefs = alpha;
  model.train_labels = labels;

  model.weights.assign(model.space->size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    const double coef = alpha[i] * static_cast<double>(labels[i]);
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
      model.weights[j] += coef * vectors[i].values[j];
    }
  }

  // Bias from free support vectors; midpoint of the violating-pair bracket
  // when every multiplier sits on a bound.
  std::vector<double> free_bias;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0 && alpha[i] < c_value) {
      free_bias.push_back(-static_cast<double>(labels[i]) * grad[i]);
    }
  }
  if (!free_bias.empty()) {
    model.bias = kahan_sum(free_bias) / static_cast<double>(free_bias.size());
  } else {
    model.bias = (sel.m_up + sel.m_low) / 2.0;
  }
  return model;
}

double svm_decision(const svm_model& model, const feature_vector& v) {
  require_space(v, model.space);
  return kahan_dot(model.weights, v.values) + model.bias;
}

double svm_predict_proba(const svm_model& model, const feature_vector& v) {
  const double f = svm_decision(model, v);
  const double z = model.platt.a * f + model.platt.b;
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double svm_max_kkt_violation(const svm_model& model, const std::vector<feature_vector>& vectors,
                             const std::vector<int>& labels) {
  if (vectors.size() != labels.size() || vectors.size() != model.dual_coefs.size()) {
    fail(errc::bad_argument, "svm_max_kkt_violation: size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double margin = static_cast<double>(labels[i]) * svm_decision(model, vectors[i]);
    const double a = model.dual_coefs[i];
    double violation = 0.0;
    if (a <= 0.0) {
      violation = std::max(0.0, 1.0 - margin);
    } else if (a >= model.c_value) {
      violation = std::max(0.0, margin - 1.0);
    } else {
      violation = std::abs(margin - 1.0);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

platt_params platt_fit(const std::vector<double>& decisions, const std::vector<int>& labels) {
  if (decisions.empty() || decisions.size() != labels.size()) {
    fail(errc::bad_argument, "platt_fit: decisions/labels size mismatch");
  }
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  for (int y : labels) {
    if (y == 1) {
      ++n_pos;
    } else if (y == -1) {
      ++n_neg;
    } else {
      fail(errc::bad_argument, "platt_fit: labels must be +1 or -1");
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    fail(errc::single_class, "platt_fit: both classes must be present");
  }

  platt_params params;
  params.b = std::log((static_cast<double>(n_neg) + 1.0) / (static_cast<double>(n_pos) + 1.0));

  const auto [lo_it, hi_it] = std::minmax_element(decisions.begin(), decisions.end());
  if (*lo_it == *hi_it) {
    // no signal in the decisions; sigmoid collapses to the smoothed rate
    params.a = 0.0;
    params.degenerate = true;
    return params;
  }

  const double t_pos = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
  const double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);
  const std::size_t n = decisions.size();
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    targets[i] = labels[i] == 1 ? t_pos : t_neg;
  }

  const auto loss = [&](double a, double b) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * decisions[i] + b;
      if (z >= 0.0) {
        total += targets[i] * z + std::log1p(std::exp(-z));
      } else {
        total += (targets[i] - 1.0) * z + std::log1p(std::exp(z));
      }
    }
    return total;
  };

  constexpr double ridge = 1e-12;
  constexpr double grad_goal = 1e-8;
  double a = 0.0;
  double b = params.b;
  double current = loss(a, b);

  for (int iter = 0; iter < 100; ++iter) {
    double g_a = 0.0;
    double g_b = 0.0;
    double h_aa = ridge;
    double h_bb = ridge;
    double h_ab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * decisions[i] + b;
      double p;
      if (z >= 0.0) {
        const double e = std::exp(-z);
        p = e / (1.0 + e);
      } else {
        p = 1.0 / (1.0 + std::exp(z));
      }
      const double d1 = targets[i] - p;
      const double d2 = p * (1.0 - p);
      g_a += decisions[i] * d1;
      g_b += d1;
      h_aa += decisions[i] * decisions[i] * d2;
      h_bb += d2;
      h_ab += decisions[i] * d2;
    }
    if (std::sqrt(g_a * g_a + g_b * g_b) <= grad_goal) {
      break;
    }

    const double det = h_aa * h_bb - h_ab * h_ab;
    const double step_a = -(h_bb * g_a - h_ab * g_b) / det;
    const double step_b = -(h_aa * g_b - h_ab * g_a) / det;
    const double descent = g_a * step_a + g_b * step_b;

    double scale = 1.0;
    while (scale >= 1e-10) {
      const double trial = loss(a + scale * step_a, b + scale * step_b);
      if (trial <= current + 1e-4 * scale * descent) {
        a += scale * step_a;
        b += scale * step_b;
        current = trial;
        break;
      }
      scale /= 2.0;
    }
    if (scale < 1e-10) {
      break;  // line search exhausted; gradient already tiny in practice
    }
  }

  params.a = a;
  params.b = b;
  return params;
}

// --- JSON forms -------------------------------------------------------------

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void check_space_hash(const nlohmann::ordered_json& j, const feature_space_ptr& space,
                      const char* who) {
  if (!space) {
    fail(errc::bad_argument, std::string(who) + ": null feature space");
  }
  const std::string expected = j.at("space_hash").get<std::string>();
  if (expected != hash_hex(space->content_hash())) {
    fail(errc::space_mismatch, std::string(who) + ": feature space hash mismatch");
  }
}

}  // namespace

nlohmann::ordered_json nbc_model_to_json(const nbc_model& model) {
  nlohmann::ordered_json j;
  j["type"] = "nbc";
  j["space_hash"] = hash_hex(model.space->content_hash());
  j["alpha"] = model.alpha;
  j["classes"] = model.classes;
  j["log_priors"] = model.log_priors;
  j["log_likelihoods"] = model.log_likelihoods;
  return j;
}

nbc_model nbc_model_from_json(const nlohmann::ordered_json& j, feature_space_ptr space) {
  check_space_hash(j, space, "nbc_model_from_json");
  nbc_model model;
  model.space = std::move(space);
  model.alpha = j.at("alpha").get<double>();
  model.classes = j.at("classes").get<std::vector<std::string>>();
  model.log_priors = j.at("log_priors").get<std::vector<double>>();
  model.log_likelihoods = j.at("log_likelihoods").get<std::vector<std::vector<double>>>();
  return model;
}

nlohmann::ordered_json svm_model_to_json(const svm_model& model) {
  nlohmann::ordered_json j;
  j["type"] = "svm";
  j["space_hash"] = hash_hex(model.space->content_hash());
  j["C"] = model.c_value;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["platt"] = {{"a", model.platt.a}, {"b", model.platt.b}, {"degenerate", model.platt.degenerate}};
  j["dual_coefs"] = model.dual_coefs;
  j["train_labels"] = model.train_labels;
  return j;
}

svm_model svm_model_from_json(const nlohmann::ordered_json& j, feature_space_ptr space) {
  check_space_hash(j, space, "svm_model_from_json");
  svm_model model;
  model.space = std::move(space);
  model.c_value = j.at("C").get<double>();
  model.weights = j.at("weights").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.platt.a = j.at("platt").at("a").get<double>();
  model.platt.b = j.at("platt").at("b").get<double>();
  model.platt.degenerate = j.at("platt").at("degenerate").get<bool>();
  model.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
  model.train_labels = j.at("train_labels").get<std::vector<int>>();
  return model;
}

}  // namespace stylo
