#pragma once

#include <cmath>
#include <limits>
#include <span>

#include "bsmpc/nmpc/horizon.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::bsm {

using nmpc::HorizonSolution;
using nmpc::MarginVector;

struct BsmConfig {
  double eta = 0.8;       ///< confidence threshold
  double epsilon = 0.4;   ///< cost threshold, shared with the GA
  InputVector beta;       ///< physical margins
  int nu = 100;
  int xi = 10;
  /// Threshold actually compared against the confidence. NaN means use eta
  /// as is; a calibrated predictor fills this in.
  double confidence_threshold = std::numeric_limits<double>::quiet_NaN();

  double gate() const noexcept {
    return std::isnan(confidence_threshold) ? eta : confidence_threshold;
  }
  void validate() const;
};

double overall_confidence(std::span<const double> per_input);

/// Predicted margins when the previous cycle improved on the one before (or
/// already met epsilon) and the prediction is confident; physical margins otherwise.
MarginVector select_margin(const MarginVector& predicted, double overall, double j_prev1,
                           double j_prev2, const BsmConfig& cfg);

/// max(floor(nu * max_i psi_i / beta_i), xi), capped at nu.
int population_size(const MarginVector& psi, const BsmConfig& cfg);

/// Clamps every width to [0, beta_i].
MarginVector clamp_margin(const MarginVector& m, const InputVector& beta);

enum class Alignment {
  kSameTime,      ///< step k of the current cycle against step k+1 of the previous one
  kSamePosition,  ///< step k against step k
};

/// Per input, the largest absolute change between the two cycles' solutions.
MarginVector bsm_from_solutions(const HorizonSolution& current, const HorizonSolution& previous,
                                const plant::ModelSpec& spec,
                                Alignment alignment = Alignment::kSameTime);

}  // namespace bsmpc::bsm
