#include "bsmpc/bsm/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace bsmpc::bsm {

CvResult cross_validate(const RowMatrix& features, const Eigen::VectorXd& targets,
                        const std::vector<SvrParams>& grid, int folds, std::uint64_t seed) {
  const auto rows = static_cast<std::size_t>(features.rows());
  if (grid.empty()) throw ConfigError("cross_validate: empty grid");
  if (folds < 2 || rows < static_cast<std::size_t>(folds)) {
    throw ConfigError("cross_validate: need at least `folds` rows and two folds");
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_stream(seed, "cv");
  std::shuffle(order.begin(), order.end(), rng);

  CvResult result;
  result.best_mse = INFINITY;
  for (const auto& params : grid) {
    double sq = 0.0;
    for (int f = 0; f < folds; ++f) {
      std::vector<std::size_t> train, test;
      for (std::size_t r = 0; r < rows; ++r) {
        (static_cast<int>(r % static_cast<std::size_t>(folds)) == f ? test : train).push_back(order[r]);
      }
      RowMatrix x(static_cast<Eigen::Index>(train.size()), features.cols());
      Eigen::VectorXd t(static_cast<Eigen::Index>(train.size()));
      for (std::size_t r = 0; r < train.size(); ++r) {
        x.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(train[r]));
        t[static_cast<Eigen::Index>(r)] = targets[static_cast<Eigen::Index>(train[r])];
      }
      const SvrModel m = train_svr(x, t, params);
      const auto cols = static_cast<std::size_t>(features.cols());
      for (std::size_t r : test) {
        const double e = m.predict(std::span(features.row(static_cast<Eigen::Index>(r)).data(), cols)) -
                         targets[static_cast<Eigen::Index>(r)];
        sq += e * e;
      }
    }
    const double mse = sq / static_cast<double>(rows);
    result.scores.push_back({params, mse});
    if (mse < result.best_mse) {
      result.best_mse = mse;
      result.best = params;
    }
  }
  return result;
}

namespace {

/// Standard deviation of the targets, floored so constant targets still train.
double target_spread(const Eigen::VectorXd& t) {
  const double mean = t.mean();
  const double var = (t.array() - mean).square().mean();
  return std::max(std::sqrt(var), 1e-12);
}

}  // namespace

std::vector<SvrParams> default_grid(const RowMatrix& features, const Eigen::VectorXd& targets) {
  const double d2 = median_squared_distance(features);
  const double spread = target_spread(targets);
  std::vector<SvrParams> grid;
  for (double g : {0.1, 1.0, 10.0}) {
    for (double c : {0.1, 1.0, 10.0}) {
      for (double lam : {0.01, 0.05}) {
        SvrParams p;
        p.gamma = g * d2;
        p.C = c * spread;
        p.lambda = lam * spread;
        grid.push_back(p);
      }
    }
  }
  return grid;
}

SvrParams scaled_params(double C, double lambda, double gamma, const RowMatrix& features,
                        const Eigen::VectorXd& targets) {
  if (targets.size() == 0) throw ConfigError("scaled_params: no targets");
  const double spread = target_spread(targets);
  SvrParams p;
  p.C = C * spread;
  p.lambda = lambda * spread;
  p.gamma = gamma * median_squared_distance(features);
  p.validate();
  return p;
}

}  // namespace bsmpc::bsm
