#pragma once

#include <memory>
#include <vector>

#include "bsmpc/bsm/proposed.hpp"
#include "bsmpc/ga/solver.hpp"

namespace bsmpc::baselines {

using ga::CycleContext;
using ga::CycleOutcome;
using ga::WarmStart;
using nmpc::HorizonSolution;
using nmpc::MarginVector;

struct PsoConfig {
  double w = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;

  void validate() const;
};

struct DeConfig {
  double F = 0.6;
  double CR = 0.8;

  void validate() const;
};

/// GA with psi = beta and p = nu in every cycle.
CycleOutcome og_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const ga::GaConfig& cfg, ga::Clock& clock, Rng& rng);

/// ceil(0.8 p) uniform samples inside beta plus the floor(0.2 p) best members
/// of `previous_ranked`, each shifted one step. Missing members are sampled.
std::vector<HorizonSolution> mg_population(const WarmStart& warm,
                                           const std::vector<HorizonSolution>& previous_ranked,
                                           int p, const plant::ModelSpec& spec, Rng& rng);

CycleOutcome mg_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const std::vector<HorizonSolution>& previous_ranked,
                      const ga::GaConfig& cfg, ga::Clock& clock, Rng& rng);

/// Global-best PSO over the input box; one iteration per generation.
CycleOutcome pso_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                       const ga::GaConfig& cfg, const PsoConfig& pso, ga::Clock& clock, Rng& rng);

/// DE/rand/1/bin with greedy selection; one sweep per generation.
CycleOutcome de_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const ga::GaConfig& cfg, const DeConfig& de, ga::Clock& clock, Rng& rng);

class OgSolver final : public ga::CycleSolver {
 public:
  explicit OgSolver(ga::GaConfig cfg) : cfg_(cfg) {}
  ga::SolverKind kind() const override { return ga::SolverKind::kOG; }
  CycleOutcome solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                     const CycleContext& ctx, ga::Clock& clock, Rng& rng) override;
  MarginVector last_margin() const override { return margin_; }

 private:
  ga::GaConfig cfg_;
  MarginVector margin_;
};

class MgSolver final : public ga::CycleSolver {
 public:
  explicit MgSolver(ga::GaConfig cfg) : cfg_(cfg) {}
  ga::SolverKind kind() const override { return ga::SolverKind::kMG; }
  CycleOutcome solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                     const CycleContext& ctx, ga::Clock& clock, Rng& rng) override;
  MarginVector last_margin() const override { return margin_; }

 private:
  ga::GaConfig cfg_;
  std::vector<HorizonSolution> ranked_;
  MarginVector margin_;
};

class PsoSolver final : public ga::CycleSolver {
 public:
  PsoSolver(ga::GaConfig cfg, PsoConfig pso) : cfg_(cfg), pso_(pso) {}
  ga::SolverKind kind() const override { return ga::SolverKind::kPSO; }
  CycleOutcome solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                     const CycleContext& ctx, ga::Clock& clock, Rng& rng) override;
  MarginVector last_margin() const override { return margin_; }

 private:
  ga::GaConfig cfg_;
  PsoConfig pso_;
  MarginVector margin_;
};

class DeSolver final : public ga::CycleSolver {
 public:
  DeSolver(ga::GaConfig cfg, DeConfig de) : cfg_(cfg), de_(de) {}
  ga::SolverKind kind() const override { return ga::SolverKind::kDE; }
  CycleOutcome solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                     const CycleContext& ctx, ga::Clock& clock, Rng& rng) override;
  MarginVector last_margin() const override { return margin_; }

 private:
  ga::GaConfig cfg_;
  DeConfig de_;
  MarginVector margin_;
};

struct SolverSettings {
  ga::GaConfig ga;
  PsoConfig pso;
  DeConfig de;
  bsm::BsmConfig bsm;
  std::shared_ptr<const bsm::MarginPredictor> predictor;  ///< required for kProposed
};

std::unique_ptr<ga::CycleSolver> make_solver(ga::SolverKind kind, const SolverSettings& settings);

}  // namespace bsmpc::baselines
