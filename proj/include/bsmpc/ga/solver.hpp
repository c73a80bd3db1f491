#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bsmpc/ga/clock.hpp"
#include "bsmpc/ga/config.hpp"
#include "bsmpc/ga/operators.hpp"
#include "bsmpc/nmpc/evaluator.hpp"

namespace bsmpc::ga {

/// Where a cycle's search starts and what it falls back to.
struct WarmStart {
  HorizonSolution center;
  HorizonSolution fallback;

  /// Both are the previous best shifted forward one step.
  static WarmStart from_previous(const HorizonSolution& prev_best, int n);
  /// Cycle 0: the reference inputs over the horizon, made rate-consistent with `u_prev`.
  static WarmStart bootstrap(const nmpc::CycleProblem& problem);
};

struct CycleOutcome {
  HorizonSolution best;
  InputVector applied_input;
  bool converged = false;
  bool used_fallback = false;
  bool budget_exhausted = false;
  int generations_run = 0;
  double wall_time = 0.0;
  int population_size_used = 0;
  std::size_t evaluations = 0;
  /// Best feasible cost after each generation (+inf until one is found).
  std::vector<double> best_history;
  /// Final population ranked best-first (feasible before infeasible).
  std::vector<HorizonSolution> ranked;
};

/// Shared bookkeeping for every solver: the time budget, best-so-far
/// tracking, and the fallback to the shifted previous solution.
class CycleRun {
 public:
  CycleRun(const nmpc::CycleProblem& problem, const GaConfig& cfg, Clock& clock);

  bool time_left() const;
  /// Evaluates, charges the clock, and offers every feasible member as a new best.
  void evaluate(std::span<HorizonSolution> candidates);
  bool has_best() const noexcept { return has_best_; }
  const HorizonSolution& best() const noexcept { return best_; }
  bool reached_threshold() const noexcept { return has_best_ && best_.cost <= cfg_.epsilon; }

  /// Builds the outcome, substituting `warm.fallback` if nothing feasible was found.
  CycleOutcome finish(const WarmStart& warm, int generations_run, int population_size,
                      std::vector<HorizonSolution> ranked);
  /// Appends the current best cost to the per-generation history.
  void record_generation();

  const nmpc::CandidateEvaluator& evaluator() const noexcept { return evaluator_; }

 private:
  const nmpc::CycleProblem& problem_;
  const GaConfig& cfg_;
  Clock& clock_;
  nmpc::CandidateEvaluator evaluator_;
  HorizonSolution best_;
  bool has_best_ = false;
  std::size_t charged_ = 0;
  std::vector<double> history_;
};

/// Sorts best-first: feasible by ascending cost, then infeasible by ascending cost.
void rank_population(std::vector<HorizonSolution>& population);

/// One control cycle of the genetic algorithm with margin `psi` and population `population`.
CycleOutcome solve_cycle(const nmpc::CycleProblem& problem, const WarmStart& warm,
                         const MarginVector& psi, int population, const GaConfig& cfg,
                         Clock& clock, Rng& rng);

/// Same as `solve_cycle` but starting from an explicit initial population.
CycleOutcome evolve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                    std::vector<HorizonSolution> population, const MarginVector& psi,
                    const GaConfig& cfg, Clock& clock, Rng& rng);

enum class SolverKind { kOG, kMG, kPSO, kDE, kProposed };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view tag);

/// Per-cycle context the controller hands to a solver.
struct CycleContext {
  std::size_t cycle = 0;
  /// Weighted model-vs-measurement discrepancy for this cycle.
  StateVector error;
};

/// A stateful NMPC solver: one call per control cycle.
class CycleSolver {
 public:
  virtual ~CycleSolver() = default;
  virtual SolverKind kind() const = 0;
  virtual CycleOutcome solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                             const CycleContext& ctx, Clock& clock, Rng& rng) = 0;
  /// Margin and population used in the last cycle (for logging).
  virtual MarginVector last_margin() const { return {}; }
  virtual double last_confidence() const { return 0.0; }
};

}  // namespace bsmpc::ga
