#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <span>

#include "bsmpc/common.hpp"

namespace bsmpc::bsm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class KernelKind { kGaussian, kLinear };

/// exp(-||x - y||^2 / gamma)
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double gamma);
double kernel(KernelKind kind, std::span<const double> x, std::span<const double> y,
              double gamma);

struct SvrParams {
  double C = 1.0;
  double lambda = 0.1;  ///< half-width of the insensitive tube
  double gamma = 1.0;
  KernelKind kernel = KernelKind::kGaussian;
  double tolerance = 1e-5;  ///< maximal KKT violation at termination
  long max_iterations = 1'000'000;
  std::size_t cache_bytes = std::size_t{256} << 20;

  void validate() const;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, double kkt_violation)
      : Error(what), violation_(kkt_violation) {}
  double kkt_violation() const noexcept { return violation_; }

 private:
  double violation_;
};

/// Trained epsilon-insensitive regressor. Immutable after training.
struct SvrModel {
  KernelKind kind = KernelKind::kGaussian;
  double gamma = 1.0;
  double C = 1.0;
  double lambda = 0.1;
  double bias = 0.0;
  RowMatrix support_vectors;      ///< n_s x m
  Eigen::VectorXd dual_coefs;     ///< alpha+ - alpha-
  long iterations = 0;
  double kkt_violation = 0.0;

  int n_s() const noexcept { return static_cast<int>(dual_coefs.size()); }
  int dims() const noexcept { return static_cast<int>(support_vectors.cols()); }

  /// sum_j coef_j K(sv_j, x) + b. Adds the number of kernel evaluations to
  /// `kernel_evaluations` when given.
  double predict(std::span<const double> x, std::size_t* kernel_evaluations = nullptr) const;

  /// 1 / sum_j ||x - sv_j||, capped at `cap` (also returned when the sum is zero).
  double confidence(std::span<const double> x, double cap = kConfidenceCap) const;

  static constexpr double kConfidenceCap = 1e12;
};

/// Solves the dual problem by sequential minimal optimization. `features` is
/// rows x m, `targets` has one entry per row.
SvrModel train_svr(const RowMatrix& features, const Eigen::VectorXd& targets,
                   const SvrParams& params);

/// Median of pairwise squared distances over at most `max_rows` rows: a
/// natural unit for gamma.
double median_squared_distance(const RowMatrix& features, std::size_t max_rows = 500);

}  // namespace bsmpc::bsm
