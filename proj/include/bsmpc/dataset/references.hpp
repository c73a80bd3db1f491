#pragma once

#include <cstdint>
#include <vector>

#include "bsmpc/common.hpp"
#include "bsmpc/nmpc/reference.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::dataset {

struct ReferenceGenConfig {
  int cycles = 500;   ///< N
  int horizon = 10;   ///< h; the track holds N + h states
  double amplitude = 0.6;  ///< fraction of each channel's half-range
  double slow_period_min = 4.0;
  double slow_period_max = 10.0;
  double fast_period_min = 1.0;
  double fast_period_max = 3.0;
  double step_rate = 0.1;    ///< held-step changes per second
  double step_weight = 0.4;  ///< share of the amplitude given to held steps
  double slew = 0.2;         ///< max change per second, fraction of the half-range
  std::uint64_t seed = 0;

  void validate() const;
};

/// One shaped reference channel.
struct Channel {
  double center = 0.0;
  double half_range = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double max_rate = 0.0;  ///< absolute slew cap per second, 0 = none
};

/// Sum of two or three sinusoids plus held steps, slew-limited, clipped to
/// [lo, hi], starting at the channel center.
std::vector<double> shape_signal(const Channel& ch, const ReferenceGenConfig& cfg,
                                 std::size_t length, double ts, Rng& rng);

/// Channels shaped for a model; other states are filled by the model.
std::vector<Channel> reference_channels(const plant::Model& model, const ReferenceGenConfig& cfg);

/// N + h reference states with the model's trim inputs as reference inputs.
nmpc::ReferenceTrack generate_references(const plant::Model& model,
                                         const ReferenceGenConfig& cfg, Rng& rng);

}  // namespace bsmpc::dataset
