#include "bsmpc/bsm/proposed.hpp"

namespace bsmpc::bsm {

ProposedSolver::ProposedSolver(std::shared_ptr<const MarginPredictor> predictor, BsmConfig bsm,
                               ga::GaConfig ga)
    : predictor_(std::move(predictor)), bsm_(std::move(bsm)), ga_(ga) {
  if (!predictor_) throw ConfigError("proposed solver: no margin predictor");
  bsm_.validate();
  ga_.validate();
  if (predictor_->inputs() != bsm_.beta.size()) {
    throw DimensionError("proposed solver: predictor and beta disagree on n");
  }
}

ga::CycleOutcome ProposedSolver::solve(const nmpc::CycleProblem& problem,
                                       const ga::WarmStart& warm, const ga::CycleContext& ctx,
                                       ga::Clock& clock, Rng& rng) {
  const MarginVector beta(bsm_.beta);
  margin_ = beta;
  confidence_ = 0.0;
  used_prediction_ = false;
  kernel_evals_ = 0;
  // The gate needs two previous costs.
  if (history_ >= 2) {
    const auto pred = predictor_->predict(ctx.error);
    kernel_evals_ = pred.kernel_evaluations;
    confidence_ = pred.overall;
    margin_ = select_margin(clamp_margin(pred.margins, bsm_.beta), pred.overall, j1_, j2_, bsm_);
    used_prediction_ = pred.overall > bsm_.gate() && (j1_ <= j2_ || j1_ < bsm_.epsilon);
  }
  const int p = population_size(margin_, bsm_);
  auto out = ga::solve_cycle(problem, warm, margin_, p, ga_, clock, rng);
  j2_ = j1_;
  j1_ = out.best.cost;
  ++history_;
  return out;
}

}  // namespace bsmpc::bsm
