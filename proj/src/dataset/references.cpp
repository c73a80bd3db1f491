#include "bsmpc/dataset/references.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace bsmpc::dataset {

void ReferenceGenConfig::validate() const {
  if (horizon < 1) throw ConfigError("references: horizon must be >= 1");
  if (cycles < horizon + 2) throw ConfigError("references: need N >= h + 2 cycles");
  if (!(amplitude >= 0.0)) throw ConfigError("references: amplitude must be non-negative");
  if (!(slow_period_min > 0.0 && slow_period_min <= slow_period_max) ||
      !(fast_period_min > 0.0 && fast_period_min <= fast_period_max)) {
    throw ConfigError("references: periods must be positive and ordered");
  }
  if (!(step_weight >= 0.0 && step_weight <= 1.0)) {
    throw ConfigError("references: step_weight must be in [0,1]");
  }
  if (!(step_rate >= 0.0) || !(slew > 0.0)) {
    throw ConfigError("references: step_rate must be >= 0 and slew > 0");
  }
}

std::vector<double> shape_signal(const Channel& ch, const ReferenceGenConfig& cfg,
                                 std::size_t length, double ts, Rng& rng) {
  std::vector<double> out(length, ch.center);
  const double amp = cfg.amplitude * ch.half_range;
  if (length == 0 || amp <= 0.0) return out;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int components = unit(rng) < 0.5 ? 2 : 3;
  std::vector<double> period(static_cast<std::size_t>(components)), phase(period.size()),
      weight(period.size());
  double wsum = 0.0;
  for (std::size_t c = 0; c < period.size(); ++c) {
    const double lo = c == 0 ? cfg.slow_period_min : cfg.fast_period_min;
    const double hi = c == 0 ? cfg.slow_period_max : cfg.fast_period_max;
    period[c] = lo + (hi - lo) * unit(rng);
    phase[c] = 2.0 * std::numbers::pi * unit(rng);
    weight[c] = 0.5 + unit(rng);
    wsum += weight[c];
  }
  const double wave_amp = amp * (1.0 - cfg.step_weight);
  const double step_amp = amp * cfg.step_weight;
  const double p_step = std::min(1.0, cfg.step_rate * ts);
  double rate = cfg.slew * ch.half_range;
  if (ch.max_rate > 0.0) rate = std::min(rate, ch.max_rate);
  const double max_step = rate * ts;

  double level = 0.0;
  double value = ch.center;
  for (std::size_t k = 0; k < length; ++k) {
    const double t = static_cast<double>(k) * ts;
    if (unit(rng) < p_step) level = step_amp * (2.0 * unit(rng) - 1.0);
    double wave = 0.0;
    for (std::size_t c = 0; c < period.size(); ++c) {
      wave += weight[c] / wsum * std::sin(2.0 * std::numbers::pi * t / period[c] + phase[c]);
    }
    const double target = std::clamp(ch.center + wave_amp * wave + level, ch.lo, ch.hi);
    if (k > 0) value += std::clamp(target - value, -max_step, max_step);
    out[k] = std::clamp(value, ch.lo, ch.hi);
  }
  return out;
}

std::vector<Channel> reference_channels(const plant::Model& model, const ReferenceGenConfig&) {
  const auto& s = model.spec();
  const double pi = std::numbers::pi;
  if (s.name == "uav") {
    // X, Y, Z; attitude references stay level.
    const double half = s.fallback_range[0] / 2.0;
    return {Channel{0.0, half, -half, half, 0.0}, Channel{0.0, half, -half, half, 0.0},
            Channel{0.0, half, -half, half, 0.0}};
  }
  if (s.name == "vehicle") {
    // Speed and heading; the path is integrated from them.
    return {Channel{10.0, 5.0, 5.0, 15.0, 0.0}, Channel{0.0, pi / 2, -pi / 2, pi / 2, 0.8}};
  }
  if (s.name == "sfjr") {
    // Link angle; the holding current must stay non-negative, so the link
    // stays in [0, pi/2]. The cap keeps both joint rates inside their bounds.
    const double rate_cap = 0.9 * s.x_max[1] / 1.05;
    return {Channel{pi / 4, pi / 4, 0.0, pi / 2, rate_cap}};
  }
  throw ConfigError("references: no reference profile for model '" + s.name + "'");
}

nmpc::ReferenceTrack generate_references(const plant::Model& model,
                                         const ReferenceGenConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto& s = model.spec();
  const auto length = static_cast<std::size_t>(cfg.cycles + cfg.horizon);
  const auto channels = reference_channels(model, cfg);
  std::vector<std::vector<double>> sig;
  for (const auto& ch : channels) sig.push_back(shape_signal(ch, cfg, length, s.ts, rng));

  std::vector<StateVector> states(length, StateVector::Zero(s.m));
  if (s.name == "uav") {
    for (std::size_t k = 0; k < length; ++k) {
      for (int j = 0; j < 3; ++j) states[k][j] = sig[static_cast<std::size_t>(j)][k];
    }
  } else if (s.name == "vehicle") {
    double X = 0.0, Y = 0.0;
    for (std::size_t k = 0; k < length; ++k) {
      states[k][0] = X;
      states[k][1] = Y;
      X += sig[0][k] * std::cos(sig[1][k]) * s.ts;
      Y += sig[0][k] * std::sin(sig[1][k]) * s.ts;
    }
  } else {
    for (std::size_t k = 0; k < length; ++k) states[k][0] = sig[0][k];
  }
  model.complete_reference(states);

  nmpc::ReferenceTrack track;
  track.states = std::move(states);
  track.inputs.reserve(length);
  for (const auto& x : track.states) track.inputs.push_back(model.trim_input(x));
  return track;
}

}  // namespace bsmpc::dataset
