#pragma once

#include <cstdint>

#include "bsmpc/common.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::plant {

struct NoiseConfig {
  double rho = 0.0;    ///< input noise σ in percent of the physical input margin
  double theta = 0.0;  ///< measurement noise σ in percent of the state range
  std::uint64_t seed = 0;

  void validate() const;
};

/// Additive Gaussian actuator noise, clipped to the input bounds.
InputVector perturb_input(const InputVector& u, const ModelSpec& spec, const NoiseConfig& cfg,
                          Rng& rng);

/// Additive Gaussian sensor noise, clipped to the state bounds.
StateVector perturb_measurement(const StateVector& x, const ModelSpec& spec,
                                const NoiseConfig& cfg, Rng& rng);

}  // namespace bsmpc::plant
