#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bsmpc/baselines/solvers.hpp"
#include "bsmpc/dataset/references.hpp"
#include "bsmpc/plant/noise.hpp"

namespace bsmpc::bench {

struct ExperimentConfig {
  std::string model = "sfjr";
  ga::SolverKind solver = ga::SolverKind::kProposed;
  int cycles = 4000;  ///< H
  std::vector<std::uint64_t> seeds{0};

  plant::NoiseConfig noise;           ///< plant noise during runs
  plant::NoiseConfig training_noise;  ///< plant noise while building the dataset

  ga::GaConfig ga;
  double eta = 0.8;
  /// Compare confidences against the validation quantile for eta (see MarginPredictor).
  bool calibrated_gate = true;
  baselines::PsoConfig pso;
  baselines::DeConfig de;

  /// Per input, scale-free (see bsm::scaled_params).
  std::vector<double> svr_C, svr_lambda, svr_gamma;

  dataset::ReferenceGenConfig references;
  std::uint64_t training_seed = 1000;  ///< dataset run r uses training_seed + r
  int dataset_runs = 8;
  int dataset_cycles = 500;
  double validation_fraction = 0.2;

  std::string clock = "counting";  ///< "counting" or "wall"
  double seconds_per_evaluation = 5e-5;

  std::map<std::string, double> model_params;
  std::string predictor_path;  ///< empty: train one from a generated dataset
  std::string dataset_path;
  std::string output_dir = "out";

  void validate() const;
};

/// Paper defaults per model, run lengths 100 s (uav, vehicle) and 160 s (sfjr).
ExperimentConfig defaults_for(std::string_view model);

/// Reads a JSON config; keys not given keep the defaults of its "model".
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
/// Stable JSON with every setting, used for manifests and round-trips.
std::string config_json(const ExperimentConfig& cfg, int indent = 2);

}  // namespace bsmpc::bench
