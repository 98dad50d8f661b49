#pragma once

#include <string>
#include <vector>

#include "stylo/features.hpp"

namespace stylo {

// 1 - cos(angle(u, v)). In [0, 1] for non-negative vectors. Exactly
// symmetric in its arguments; invariant under positive scaling.
double cosine_distance(const feature_vector& u, const feature_vector& v);

// Arithmetic mean of cosine distances from vectors[index] to every other
// vector. Requires at least two vectors.
double avg_distance_to_peers(std::size_t index, const std::vector<feature_vector>& vectors);

struct distance_matrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // square, symmetric, zero diagonal
};

distance_matrix build_distance_matrix(std::vector<std::string> labels,
                                      const std::vector<feature_vector>& vectors);

}  // namespace stylo
