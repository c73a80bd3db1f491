#pragma once

#include <atomic>
#include <functional>
#include <span>

#include "bsmpc/nmpc/feasibility.hpp"
#include "bsmpc/nmpc/reference.hpp"

namespace bsmpc::nmpc {

/// Everything a solver needs to score candidates in one control cycle.
/// `refs` is the window sent with the measurement; index 0 is the current cycle.
struct CycleProblem {
  const plant::Model* model = nullptr;
  StateVector x0;
  ReferenceTrack refs;
  InputVector u_prev;
  TerminalSet terminal;
  /// Test hook: candidates for which this returns true are screened out.
  std::function<bool(const HorizonSolution&)> veto;

  const plant::ModelSpec& spec() const { return model->spec(); }
};

/// Rolls out, screens and costs candidates. Thread-safe; counts evaluations.
class CandidateEvaluator {
 public:
  explicit CandidateEvaluator(const CycleProblem& problem) : problem_(problem) {}

  /// Sets cost and feasibility of `z` in place. Already-evaluated candidates are skipped.
  void evaluate(HorizonSolution& z) const;
  void evaluate_all(std::span<HorizonSolution> population) const;

  std::size_t evaluations() const noexcept { return count_.load(std::memory_order_relaxed); }

 private:
  const CycleProblem& problem_;
  mutable std::atomic<std::size_t> count_{0};
};

}  // namespace bsmpc::nmpc
