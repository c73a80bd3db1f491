#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bsmpc/bench/config.hpp"
#include "bsmpc/bench/metrics.hpp"
#include "bsmpc/bsm/predictor.hpp"
#include "bsmpc/ga/solver.hpp"
#include "bsmpc/nmpc/reference.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::bench {

/// The simulated plant. Its true state stays private: the loop only sees
/// noisy measurements, and every external read of the true state is counted.
class PlantSim {
 public:
  PlantSim(const plant::Model& model, StateVector x0, plant::NoiseConfig noise,
           std::uint64_t seed);

  /// Noisy measurement of the current state.
  StateVector measure();
  /// Applies `u` through the actuator noise and advances one step.
  void apply(const InputVector& u);

  /// Audited accessor, for evaluation code only.
  const StateVector& true_state() const;
  std::size_t true_state_reads() const noexcept { return reads_; }

 private:
  const plant::Model& model_;
  StateVector x_;
  plant::NoiseConfig noise_;
  Rng input_rng_;
  Rng sensor_rng_;
  mutable std::size_t reads_ = 0;
};

/// Controller side of the loop: receives (measured state, reference window),
/// returns the input to apply.
class Controller {
 public:
  Controller(const plant::Model& model, std::unique_ptr<ga::CycleSolver> solver,
             std::unique_ptr<ga::Clock> clock, std::uint64_t seed);

  InputVector step(const StateVector& measured, const nmpc::ReferenceTrack& window);
  const CycleLog& last_log() const noexcept { return log_; }
  const ga::CycleSolver& solver() const noexcept { return *solver_; }

 private:
  const plant::Model& model_;
  std::unique_ptr<ga::CycleSolver> solver_;
  std::unique_ptr<ga::Clock> clock_;
  std::uint64_t seed_;
  std::size_t cycle_ = 0;
  StateVector prev_measured_;
  InputVector u_prev_;
  nmpc::HorizonSolution prev_best_;
  bool have_prev_ = false;
  CycleLog log_;
};

struct RunResult {
  std::string model;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<CycleLog> cycles;
  RunMetrics metrics;
  bool plant_failed = false;
  std::size_t true_state_reads = 0;
  std::vector<std::string> log;
};

/// Model with the config's parameter overrides applied.
std::unique_ptr<plant::Model> build_model(const ExperimentConfig& cfg);

/// Reference track for one run of `cfg.cycles` cycles.
nmpc::ReferenceTrack run_references(const plant::Model& model, const ExperimentConfig& cfg,
                                    std::uint64_t seed);

std::unique_ptr<ga::Clock> make_clock(const ExperimentConfig& cfg);

/// Solver for `cfg.solver`; the proposed solver needs `predictor`.
std::unique_ptr<ga::CycleSolver> build_solver(
    const ExperimentConfig& cfg, const plant::ModelSpec& spec,
    std::shared_ptr<const bsm::MarginPredictor> predictor);

/// H cycles of plant and controller for one seed. Setup errors throw before
/// cycle 0; solver errors are logged per cycle and handled by the fallback.
RunResult run_closed_loop(const ExperimentConfig& cfg, std::uint64_t seed,
                          std::shared_ptr<const bsm::MarginPredictor> predictor = nullptr);

/// One run per seed of `cfg.seeds`, in parallel, returned in seed order.
std::vector<RunResult> run_all(const ExperimentConfig& cfg,
                               std::shared_ptr<const bsm::MarginPredictor> predictor = nullptr);

}  // namespace bsmpc::bench
