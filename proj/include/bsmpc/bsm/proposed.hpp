#pragma once

#include <memory>

#include "bsmpc/bsm/predictor.hpp"
#include "bsmpc/ga/solver.hpp"

namespace bsmpc::bsm {

/// GA whose margin and population come from the learned margins, gated by
/// the confidence and the cost history.
class ProposedSolver final : public ga::CycleSolver {
 public:
  ProposedSolver(std::shared_ptr<const MarginPredictor> predictor, BsmConfig bsm,
                 ga::GaConfig ga);

  ga::SolverKind kind() const override { return ga::SolverKind::kProposed; }
  ga::CycleOutcome solve(const nmpc::CycleProblem& problem, const ga::WarmStart& warm,
                         const ga::CycleContext& ctx, ga::Clock& clock, Rng& rng) override;
  MarginVector last_margin() const override { return margin_; }
  double last_confidence() const override { return confidence_; }
  bool last_used_prediction() const noexcept { return used_prediction_; }
  std::size_t last_kernel_evaluations() const noexcept { return kernel_evals_; }

 private:
  std::shared_ptr<const MarginPredictor> predictor_;
  BsmConfig bsm_;
  ga::GaConfig ga_;
  /// Best costs of the last two cycles, most recent first.
  double j1_ = INFINITY;
  double j2_ = INFINITY;
  int history_ = 0;
  MarginVector margin_;
  double confidence_ = 0.0;
  bool used_prediction_ = false;
  std::size_t kernel_evals_ = 0;
};

}  // namespace bsmpc::bsm
