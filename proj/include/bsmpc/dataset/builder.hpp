#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bsmpc/bsm/margin.hpp"
#include "bsmpc/ga/config.hpp"
#include "bsmpc/nmpc/reference.hpp"
#include "bsmpc/plant/model.hpp"
#include "bsmpc/plant/noise.hpp"

namespace bsmpc::dataset {

struct CycleRecord {
  StateVector error;   ///< E_c
  InputVector deltas;  ///< target margins
};

struct DatasetConfig {
  plant::NoiseConfig noise;
  ga::GaConfig ga;      ///< exhaustive settings: see exhaustive_ga()
  int population = 400;
  /// Extra GA passes around the incumbent with margins beta * shrink^k, k = 1..stages.
  int refine_stages = 0;
  double refine_shrink = 0.25;
  int refine_population = 100;
  /// Put the shifted previous solution into the initial population.
  bool seed_previous = true;
  bsm::Alignment alignment = bsm::Alignment::kSameTime;
  std::uint64_t seed = 0;
};

/// p = 4 nu, G = 20, no early exit, no time budget.
ga::GaConfig exhaustive_ga(const ga::GaConfig& base);

struct DatasetResult {
  std::vector<CycleRecord> records;
  std::size_t cycles = 0;        ///< cycles simulated
  std::size_t skipped = 0;       ///< cycles without a feasible GA solution
  std::size_t evaluations = 0;
  bool plant_failed = false;     ///< true plant diverged; the run stopped early
  std::vector<std::string> log;
};

/// Closed loop through the noisy plant, one exhaustive GA solve per cycle,
/// one record per cycle after the first. The initial population is sampled
/// with the physical margins plus the shifted previous solution itself.
DatasetResult build_dataset(const plant::Model& model, const nmpc::ReferenceTrack& refs,
                            const DatasetConfig& cfg);

}  // namespace bsmpc::dataset
