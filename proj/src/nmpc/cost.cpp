#include "bsmpc/nmpc/cost.hpp"

#include <cmath>
#include <limits>

namespace bsmpc::nmpc {

Rollout rollout(const plant::Model& model, const StateVector& x0, const HorizonSolution& z) {
  const auto& spec = model.spec();
  spec.check_state(x0, "initial state");
  if (static_cast<int>(z.genes.size()) != spec.h * spec.n) {
    throw DimensionError(spec.name + ": solution has " + std::to_string(z.genes.size()) +
                         " genes, expected " + std::to_string(spec.h * spec.n));
  }
  Rollout out;
  out.states.reserve(static_cast<std::size_t>(spec.h));
  StateVector x = x0;
  for (int k = 0; k < spec.h; ++k) {
    try {
      x = model.step(x, z.input(k, spec.n));
    } catch (const DivergenceError&) {
      out.diverged = true;
    } catch (const LowSpeedError&) {
      out.diverged = true;
    } catch (const SingularityError&) {
      out.diverged = true;
    }
    if (out.diverged) break;
    out.states.push_back(x);
  }
  return out;
}

double cost_from_rollout(const plant::ModelSpec& spec, const Rollout& traj,
                         const HorizonSolution& z, const ReferenceTrack& refs, std::size_t c) {
  if (traj.diverged) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int k = 0; k < spec.h; ++k) {
    const auto step = static_cast<std::size_t>(k);
    const StateVector& r = refs.state(c + step + 1);
    const InputVector& v = refs.input(c + step);
    const StateVector& x = traj.states[step];
    for (int j = 0; j < spec.m; ++j) {
      const double e = r[j] - x[j];
      total += spec.q[j] * e * e;
    }
    for (int i = 0; i < spec.n; ++i) {
      const double e = v[i] - z.genes[step * static_cast<std::size_t>(spec.n) + static_cast<std::size_t>(i)];
      total += spec.r[i] * e * e;
    }
  }
  const StateVector& last = traj.states.back();
  for (int j = 0; j < spec.m; ++j) total += spec.q_terminal[j] * last[j] * last[j];
  return total;
}

double evaluate_cost(const plant::Model& model, const StateVector& x0, const HorizonSolution& z,
                     const ReferenceTrack& refs, std::size_t c) {
  return cost_from_rollout(model.spec(), rollout(model, x0, z), z, refs, c);
}

double fitness(double cost) noexcept {
  if (std::isinf(cost)) return 0.0;
  return 1.0 / (1.0 + cost);
}

StateVector error_vector(const StateVector& measured, const StateVector& expected,
                         const plant::ModelSpec& spec) {
  spec.check_state(measured, "measured state");
  spec.check_state(expected, "expected state");
  StateVector e(spec.m);
  for (int j = 0; j < spec.m; ++j) {
    const double d = measured[j] - expected[j];
    e[j] = spec.q[j] * d * d;
  }
  return e;
}

}  // namespace bsmpc::nmpc
