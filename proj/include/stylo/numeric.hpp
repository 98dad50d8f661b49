#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace stylo {

// Neumaier-compensated summation. Large gram spaces push plain accumulation
// error past the tolerances the distance tests pin down, so every reduction
// over feature vectors goes through these.
inline double kahan_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

inline double kahan_dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  double comp = 0.0;
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    double x = a[i] * b[i];
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace stylo
