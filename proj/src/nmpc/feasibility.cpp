#include "bsmpc/nmpc/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bsmpc/nmpc/evaluator.hpp"

namespace bsmpc::nmpc {

namespace {
// Absorbs round-off of (before + du) - before after repair.
constexpr double kInputTolerance = 1e-9;
}  // namespace

std::string Violation::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::kInputBound: out << "input_bound"; break;
    case Kind::kRateBound: out << "rate_bound"; break;
    case Kind::kStateBound: out << "state_bound"; break;
    case Kind::kDivergence: out << "divergence"; break;
  }
  out << " step=" << step << " index=" << index << " value=" << value << " range=[" << lower
      << "," << upper << "]";
  return out.str();
}

FeasibilityReport check_feasibility(const plant::ModelSpec& spec, const HorizonSolution& z,
                                    const Rollout& traj, const InputVector& u_prev) {
  FeasibilityReport report;
  auto add = [&](Violation::Kind kind, int step, int index, double value, double lo, double hi) {
    report.violations.push_back(Violation{kind, step, index, value, lo, hi});
  };
  const int n = spec.n;
  for (int k = 0; k < spec.h; ++k) {
    for (int i = 0; i < n; ++i) {
      const double u = z.genes[static_cast<std::size_t>(k * n + i)];
      if (u < spec.u_min[i] - kInputTolerance || u > spec.u_max[i] + kInputTolerance) {
        add(Violation::Kind::kInputBound, k, i, u, spec.u_min[i], spec.u_max[i]);
      }
      const double before = k == 0 ? u_prev[i] : z.genes[static_cast<std::size_t>((k - 1) * n + i)];
      const double delta = u - before;
      if (delta < spec.du_min[i] - kInputTolerance || delta > spec.du_max[i] + kInputTolerance) {
        add(Violation::Kind::kRateBound, k, i, delta, spec.du_min[i], spec.du_max[i]);
      }
    }
  }
  if (traj.diverged) {
    add(Violation::Kind::kDivergence, static_cast<int>(traj.states.size()), -1,
        std::numeric_limits<double>::infinity(), -spec.blowup_bound, spec.blowup_bound);
  }
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const StateVector& x = traj.states[k];
    for (int j = 0; j < spec.m; ++j) {
      if (x[j] < spec.x_min[j] || x[j] > spec.x_max[j]) {
        add(Violation::Kind::kStateBound, static_cast<int>(k), j, x[j], spec.x_min[j],
            spec.x_max[j]);
      }
    }
  }
  report.status = report.violations.empty() ? Feasibility::kYes : Feasibility::kNo;
  return report;
}

TerminalSet TerminalSet::unbounded(int m) {
  TerminalSet t;
  t.center = StateVector::Zero(m);
  t.half_widths = StateVector::Constant(m, std::numeric_limits<double>::infinity());
  return t;
}

bool TerminalSet::contains(const StateVector& x) const {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (std::isinf(half_widths[j])) continue;
    if (std::abs(x[j] - center[j]) > half_widths[j]) return false;
  }
  return true;
}

bool check_terminal(const Rollout& traj, const TerminalSet& terminal) {
  if (traj.diverged || traj.states.empty()) return false;
  return terminal.contains(traj.states.back());
}

void repair(HorizonSolution& z, const plant::ModelSpec& spec, const InputVector& u_prev) {
  const int n = spec.n;
  bool changed = false;
  for (int k = 0; k < spec.h; ++k) {
    for (int i = 0; i < n; ++i) {
      auto& gene = z.genes[static_cast<std::size_t>(k * n + i)];
      const double before =
          k == 0 ? u_prev[i] : z.genes[static_cast<std::size_t>((k - 1) * n + i)];
      const double lo = std::max(spec.u_min[i], before + spec.du_min[i]);
      const double hi = std::min(spec.u_max[i], before + spec.du_max[i]);
      const double fixed =
          lo <= hi ? std::clamp(gene, lo, hi) : std::clamp(gene, spec.u_min[i], spec.u_max[i]);
      if (fixed != gene) {
        gene = fixed;
        changed = true;
      }
    }
  }
  if (changed) z.invalidate();
}

void CandidateEvaluator::evaluate(HorizonSolution& z) const {
  if (z.evaluated()) return;
  const auto& model = *problem_.model;
  const auto& spec = model.spec();
  count_.fetch_add(1, std::memory_order_relaxed);
  const Rollout traj = rollout(model, problem_.x0, z);
  z.cost = cost_from_rollout(spec, traj, z, problem_.refs, 0);
  const auto report = check_feasibility(spec, z, traj, problem_.u_prev);
  const bool ok = report.feasible() && check_terminal(traj, problem_.terminal) &&
                  !(problem_.veto && problem_.veto(z));
  z.feasible = ok ? Feasibility::kYes : Feasibility::kNo;
}

void CandidateEvaluator::evaluate_all(std::span<HorizonSolution> population) const {
  for (auto& z : population) evaluate(z);
}

}  // namespace bsmpc::nmpc
