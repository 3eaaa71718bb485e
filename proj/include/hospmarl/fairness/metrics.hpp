#pragma once

#include <vector>

namespace hospmarl {

// Workload Gini index over per-agent subtask counts:
//   L1 = sum_ij |x_i - x_j| / (2 n^2 mean(x))
// computed via the sorted prefix-sum form. Returns 0 for an all-zero vector
// (no work, no disparity). Range [0, 1).
double gini_l1(const std::vector<double>& counts);
double gini_l1(const std::vector<int>& counts);

// Composite disparity L3 = alpha * L1 + (1 - alpha) * L2. The endpoints are
// returned bit-exactly (alpha 1 -> L1, alpha 0 -> L2).
double composite_l3(double l1, double l2, double alpha);

// Shaped team reward r = base - lambda * L3; lambda 0 returns base bit-exactly.
double shaped_reward(double base, double l3, double lambda);

// Utilization-deviation penalty of the FEN-style baseline: per agent,
// |x_i - mean| / max(mean, 1). All-equal counts give all zeros.
std::vector<double> fen_penalty(const std::vector<int>& counts);

}  // namespace hospmarl
