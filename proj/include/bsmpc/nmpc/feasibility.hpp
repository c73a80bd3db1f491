#pragma once

#include <string>
#include <vector>

#include "bsmpc/common.hpp"
#include "bsmpc/nmpc/cost.hpp"
#include "bsmpc/nmpc/horizon.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::nmpc {

struct Violation {
  enum class Kind { kInputBound, kRateBound, kStateBound, kDivergence };
  Kind kind;
  int step;   ///< horizon step (0-based)
  int index;  ///< input or state index
  double value;
  double lower;
  double upper;

  std::string describe() const;
};

struct FeasibilityReport {
  Feasibility status = Feasibility::kUnchecked;
  std::vector<Violation> violations;

  bool feasible() const noexcept { return status == Feasibility::kYes; }
};

/// Input bounds, per-step rate bounds (the first step against `u_prev`, the
/// input applied last cycle) and state bounds along the rollout.
FeasibilityReport check_feasibility(const plant::ModelSpec& spec, const HorizonSolution& z,
                                    const Rollout& traj, const InputVector& u_prev);

/// Box around the reference; infinite half-widths accept everything.
struct TerminalSet {
  StateVector center;
  StateVector half_widths;

  static TerminalSet unbounded(int m);
  bool contains(const StateVector& x) const;
};

bool check_terminal(const Rollout& traj, const TerminalSet& terminal);

/// Projects every step onto the input box intersected with the rate window
/// around the previous step, starting from `u_prev`.
void repair(HorizonSolution& z, const plant::ModelSpec& spec, const InputVector& u_prev);

}  // namespace bsmpc::nmpc
