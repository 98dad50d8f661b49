#include "stylo/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "stylo/numeric.hpp"

namespace stylo {

double cosine_distance(const feature_vector& u, const feature_vector& v) {
  require_same_space(u, v);
  const double dot = kahan_dot(u.values, v.values);
  const double nu = std::sqrt(kahan_dot(u.values, u.values));
  const double nv = std::sqrt(kahan_dot(v.values, v.values));
  if (nu == 0.0 || nv == 0.0) {
    fail(errc::zero_norm, "cosine_distance: zero-norm vector");
  }
  const double cosine = std::clamp(dot / (nu * nv), -1.0, 1.0);
  return 1.0 - cosine;
}

double avg_distance_to_peers(std::size_t index, const std::vector<feature_vector>& vectors) {
  if (vectors.size() < 2) {
    fail(errc::bad_argument, "avg_distance_to_peers: need at least 2 vectors");
  }
  if (index >= vectors.size()) {
    fail(errc::bad_argument, "avg_distance_to_peers: index out of range");
  }
  std::vector<double> distances;
  distances.reserve(vectors.size() - 1);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (j == index) continue;
    distances.push_back(cosine_distance(vectors[index], vectors[j]));
  }
  return kahan_sum(distances) / static_cast<double>(distances.size());
}

distance_matrix build_distance_matrix(std::vector<std::string> labels,
                                      const std::vector<feature_vector>& vectors) {
  if (labels.size() != vectors.size()) {
    fail(errc::bad_argument, "build_distance_matrix: labels/vectors size mismatch");
  }
  const std::size_t n = vectors.size();
  distance_matrix m;
  m.labels = std::move(labels);
  m.values.assign(n, std::vector<double>(n, 0.0));
  // fixed (i, j) order keeps the matrix bit-identical run to run
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = cosine_distance(vectors[i], vectors[j]);
      m.values[i][j] = d;
      m.values[j][i] = d;
    }
  }
  return m;
}

}  // namespace stylo
