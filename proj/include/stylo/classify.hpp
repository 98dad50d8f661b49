#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stylo/features.hpp"

namespace stylo {

// Multinomial naive Bayes with additive smoothing. Fractional feature values
// (per-10k word rates) are accepted as pseudo-counts.
struct nbc_model {
  feature_space_ptr space;
  std::vector<std::string> classes;  // order of first appearance in training labels
  std::vector<double> log_priors;
  std::vector<std::vector<double>> log_likelihoods;  // [class][feature]
  double alpha = 1.0;
};

nbc_model nbc_train(const std::vector<feature_vector>& vectors,
                    const std::vector<std::string>& labels, double alpha);

// Log posteriors, normalized so the exponentials sum to 1 (log-sum-exp, no
// underflow). Indexed like model.classes.
std::vector<double> nbc_predict_log_proba(const nbc_model& model, const feature_vector& v);

struct platt_params {
  double a = 0.0;
  double b = 0.0;
  // Set when every decision value was identical; the sigmoid then collapses
  // to the smoothed class rate.
  bool degenerate = false;
};

// P(y=+1 | f) = 1 / (1 + exp(a*f + b)), fitted by regularized maximum
// likelihood on smoothed targets t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2).
// Newton iterations run until the gradient norm is <= 1e-8 or 100 rounds.
platt_params platt_fit(const std::vector<double>& decisions, const std::vector<int>& labels);

struct svm_model {
  feature_space_ptr space;
  std::vector<double> weights;
  double bias = 0.0;
  double c_value = 1.0;
  platt_params platt;
  std::vector<double> dual_coefs;   // one per training point, in [0, C]
  std::vector<int> train_labels;    // +-1, aligned with dual_coefs
};

struct svm_train_options {
  double c_value = 1.0;
  double tol = 1e-3;
  std::size_t max_iter = 1000000;  // pair updates before giving up
};

// Soft-margin linear SVM solved in the dual by maximal-violating-pair
// updates with a fixed scan order; fully deterministic for a fixed input
// order. Throws errc::non_convergence (reporting the residual KKT gap) if
// max_iter is exhausted.
svm_model svm_train(const std::vector<feature_vector>& vectors, const std::vector<int>& labels,
                    const svm_train_options& opts = {});

double svm_decision(const svm_model& model, const feature_vector& v);

// Platt probability of the positive class; requires model.platt to be set.
double svm_predict_proba(const svm_model& model, const feature_vector& v);

// Worst per-point violation of the KKT optimality conditions; optimal models
// stay within the training tolerance.
double svm_max_kkt_violation(const svm_model& model, const std::vector<feature_vector>& vectors,
                             const std::vector<int>& labels);

// JSON forms carry the feature space as a content hash plus decimal parameter
// arrays; loading checks the hash against the supplied space.
nlohmann::ordered_json nbc_model_to_json(const nbc_model& model);
nbc_model nbc_model_from_json(const nlohmann::ordered_json& j, feature_space_ptr space);
nlohmann::ordered_json svm_model_to_json(const svm_model& model);
svm_model svm_model_from_json(const nlohmann::ordered_json& j, feature_space_ptr space);

}  // namespace stylo
