#pragma once

#include <cstdint>
#include <vector>

#include "bsmpc/bsm/svr.hpp"

namespace bsmpc::bsm {

struct CvScore {
  SvrParams params;
  double mse = 0.0;
};

struct CvResult {
  SvrParams best;
  double best_mse = 0.0;
  std::vector<CvScore> scores;
};

/// K-fold cross-validated mean squared error for every grid point; folds are
/// a seeded shuffle of the rows.
CvResult cross_validate(const RowMatrix& features, const Eigen::VectorXd& targets,
                        const std::vector<SvrParams>& grid, int folds = 5,
                        std::uint64_t seed = 0);

/// Gamma scaled by the median squared distance, C and lambda by the target standard deviation.
std::vector<SvrParams> default_grid(const RowMatrix& features, const Eigen::VectorXd& targets);

/// Scale-free hyper-parameters mapped onto the data: gamma in units of the
/// median squared distance, C and lambda in units of the target standard deviation.
SvrParams scaled_params(double C, double lambda, double gamma, const RowMatrix& features,
                        const Eigen::VectorXd& targets);

}  // namespace bsmpc::bsm
