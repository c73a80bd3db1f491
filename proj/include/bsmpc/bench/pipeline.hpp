#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bsmpc/bench/config.hpp"
#include "bsmpc/bench/loop.hpp"
#include "bsmpc/bsm/predictor.hpp"
#include "bsmpc/dataset/builder.hpp"

namespace bsmpc::bench {

/// Exhaustive dataset settings for training run `run`.
dataset::DatasetConfig dataset_config(const ExperimentConfig& cfg, int run);

/// `cfg.dataset_runs` closed-loop dataset runs under the training noise.
std::vector<dataset::DatasetResult> generate_training_data(const ExperimentConfig& cfg);

std::vector<dataset::CycleRecord> merge_records(const std::vector<dataset::DatasetResult>& runs);

/// Trains one regressor per input on a seeded split of `records` and
/// calibrates the confidence gate on the held-out part. Empty SVR settings
/// in the config select hyper-parameters by 5-fold cross-validation.
bsm::MarginPredictor train_predictor(const std::vector<dataset::CycleRecord>& records,
                                     const ExperimentConfig& cfg, const InputVector& beta);

/// Loads `cfg.predictor_path`, or trains on `cfg.dataset_path`, or generates
/// a fresh dataset and trains on it.
std::shared_ptr<const bsm::MarginPredictor> prepare_predictor(const ExperimentConfig& cfg);

/// Parameters a sweep can vary.
enum class SweepParameter { kEpsilon, kEta, kRho, kTheta };
SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

/// `base` with one parameter replaced; noise sweeps change the run noise only.
ExperimentConfig with_parameter(const ExperimentConfig& base, SweepParameter p, double value);

struct SweepPoint {
  SweepParameter parameter = SweepParameter::kEpsilon;
  double value = 0.0;
  std::vector<RunResult> runs;  ///< one per seed, same seeds at every point
  std::string error;            ///< set when the point failed
};

std::vector<SweepPoint> sweep(SweepParameter p, const std::vector<double>& grid,
                              const ExperimentConfig& base,
                              std::shared_ptr<const bsm::MarginPredictor> predictor = nullptr);

}  // namespace bsmpc::bench
