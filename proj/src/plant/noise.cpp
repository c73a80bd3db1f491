#include "bsmpc/plant/noise.hpp"

#include <algorithm>
#include <cmath>

namespace bsmpc::plant {

void NoiseConfig::validate() const {
  if (!(rho >= 0.0 && rho < 100.0)) throw ConfigError("noise: rho must lie in [0, 100)");
  if (!(theta >= 0.0 && theta < 100.0)) throw ConfigError("noise: theta must lie in [0, 100)");
}

InputVector perturb_input(const InputVector& u, const ModelSpec& spec, const NoiseConfig& cfg,
                          Rng& rng) {
  spec.check_input(u);
  if (cfg.rho == 0.0) return u;
  std::normal_distribution<double> normal(0.0, 1.0);
  InputVector out(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const double sigma = 0.01 * cfg.rho * (spec.u_max[i] - spec.u_min[i]);
    out[i] = std::clamp(u[i] + sigma * normal(rng), spec.u_min[i], spec.u_max[i]);
  }
  return out;
}

StateVector perturb_measurement(const StateVector& x, const ModelSpec& spec,
                                const NoiseConfig& cfg, Rng& rng) {
  spec.check_state(x);
  if (cfg.theta == 0.0) return x;
  std::normal_distribution<double> normal(0.0, 1.0);
  const StateVector range = spec.state_range();
  StateVector out(spec.m);
  for (int j = 0; j < spec.m; ++j) {
    out[j] = std::clamp(x[j] + 0.01 * cfg.theta * range[j] * normal(rng), spec.x_min[j], spec.x_max[j]);
  }
  return out;
}

}  // namespace bsmpc::plant
