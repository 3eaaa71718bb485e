#include "hospmarl/fairness/metrics.hpp"

#include <algorithm>
#include <cstddef>

namespace hospmarl {

double gini_l1(const std::vector<double>& counts) {
  const std::size_t n = counts.size();
  if (n == 0) return 0.0;
  double total = 0.0;
  for (double v : counts) total += v;
  if (total <= 0.0) return 0.0;  // no work, no disparity

  // sum_{i<j} (x_(j) - x_(i)) over the sorted vector equals half the pairwise
  // absolute-difference sum; normalizing by n * total matches 2 n^2 mean.
  std::vector<double> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  double pair_sum = 0.0;
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    pair_sum += static_cast<double>(j) * sorted[j] - prefix;
    prefix += sorted[j];
  }
  return pair_sum / (static_cast<double>(n) * total);
}

double gini_l1(const std::vector<int>& counts) {
  std::vector<double> v(counts.begin(), counts.end());
  return gini_l1(v);
}

double composite_l3(double l1, double l2, double alpha) {
  if (alpha == 1.0) return l1;
  if (alpha == 0.0) return l2;
  return alpha * l1 + (1.0 - alpha) * l2;
}

double shaped_reward(double base, double l3, double lambda) {
  if (lambda == 0.0) return base;
  return base - lambda * l3;
}

std::vector<double> fen_penalty(const std::vector<int>& counts) {
  const std::size_t n = counts.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  double total = 0.0;
  for (int v : counts) total += v;
  const double mean = total / static_cast<double>(n);
  const double denom = std::max(mean, 1.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(counts[i] - mean) / denom;
  return out;
}

}  // namespace hospmarl
