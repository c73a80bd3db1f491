#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsmpc/bsm/margin.hpp"
#include "bsmpc/bsm/svr.hpp"

namespace bsmpc::bsm {

struct MarginPrediction {
  MarginVector margins;  ///< clamped to [0, beta]
  std::vector<double> confidences;
  double overall = 0.0;
  std::size_t kernel_evaluations = 0;
};

/// One regressor per control input, mapping an error vector to a margin.
class MarginPredictor {
 public:
  static constexpr int kFormatVersion = 1;

  MarginPredictor() = default;
  MarginPredictor(std::vector<SvrModel> models, InputVector beta);

  /// `deltas` is rows x n; column i trains regressor i with `params[i]`.
  static MarginPredictor train(const RowMatrix& errors, const RowMatrix& deltas,
                               const std::vector<SvrParams>& params, const InputVector& beta);

  MarginPrediction predict(std::span<const double> error) const;
  MarginPrediction predict(const StateVector& error) const {
    return predict(std::span(error.data(), static_cast<std::size_t>(error.size())));
  }

  int inputs() const noexcept { return static_cast<int>(models_.size()); }
  const SvrModel& model(int i) const { return models_.at(static_cast<std::size_t>(i)); }
  const InputVector& beta() const noexcept { return beta_; }
  std::size_t support_vectors() const;

  /// Records the overall confidence of every validation row.
  void calibrate(const RowMatrix& validation);
  bool calibrated() const noexcept { return !calibration_.empty(); }
  /// Threshold passed by a fraction `eta` of the validation rows.
  double threshold_for(double eta) const;
  const std::vector<double>& calibration() const noexcept { return calibration_; }

  void write(std::ostream& out) const;
  static MarginPredictor read(std::istream& in);
  void save(const std::string& path) const;
  static MarginPredictor load(const std::string& path);

 private:
  std::vector<SvrModel> models_;
  InputVector beta_;
  std::vector<double> calibration_;  ///< sorted ascending
};

}  // namespace bsmpc::bsm
