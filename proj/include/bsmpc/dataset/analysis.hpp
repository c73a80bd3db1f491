#pragma once

#include <span>
#include <vector>

#include "bsmpc/dataset/builder.hpp"

namespace bsmpc::dataset {

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

struct BinnedRelation {
  std::vector<double> error_max;  ///< mean of max(E_c) per bin
  std::vector<double> delta_max;  ///< mean of max_i delta_i / beta_i per bin
  double spearman = 0.0;
};

/// Sorts records by max(E_c), splits them into `bins` equal-count bins and
/// correlates the bin means of max(E_c) and of the normalized max margin.
BinnedRelation binned_error_margin(const std::vector<CycleRecord>& records,
                                   const InputVector& beta, int bins);

}  // namespace bsmpc::dataset
