#pragma once

#include <cstdint>
#include <limits>

namespace bsmpc::ga {

struct GaConfig {
  int nu = 100;  ///< maximum population
  int xi = 10;   ///< minimum population
  int generations = 3;
  double crossover_rate = 0.4;
  double mutation_rate = 0.05;
  double epsilon = 0.4;  ///< early-exit cost threshold
  double upsilon = 0.95;  ///< fraction of ts available to the solver
  int tournament_size = 3;
  std::uint64_t seed = 1;
  /// Disables the time budget (dataset generation runs every generation).
  bool unlimited_time = false;

  void validate() const;
};

}  // namespace bsmpc::ga
