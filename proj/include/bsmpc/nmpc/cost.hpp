#pragma once

#include <vector>

#include "bsmpc/common.hpp"
#include "bsmpc/nmpc/horizon.hpp"
#include "bsmpc/nmpc/reference.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::nmpc {

/// Predicted states x_{c+1..c+h}. `diverged` is set (and `states` truncated)
/// when the model map fails part-way.
struct Rollout {
  std::vector<StateVector> states;
  bool diverged = false;
};

Rollout rollout(const plant::Model& model, const StateVector& x0, const HorizonSolution& z);

/// Tracking cost over the horizon plus the terminal term; +inf for divergent rollouts.
/// `refs` is indexed from cycle `c`: r_{c+1..c+h} and v_{c..c+h-1}.
double cost_from_rollout(const plant::ModelSpec& spec, const Rollout& traj,
                         const HorizonSolution& z, const ReferenceTrack& refs, std::size_t c);

double evaluate_cost(const plant::Model& model, const StateVector& x0, const HorizonSolution& z,
                     const ReferenceTrack& refs, std::size_t c);

/// F = 1 / (1 + J), with F(+inf) = 0.
double fitness(double cost) noexcept;

/// Weighted squared discrepancy between measured and model-expected states.
StateVector error_vector(const StateVector& measured, const StateVector& expected,
                         const plant::ModelSpec& spec);

}  // namespace bsmpc::nmpc
