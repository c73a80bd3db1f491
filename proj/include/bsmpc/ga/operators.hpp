#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bsmpc/common.hpp"
#include "bsmpc/nmpc/horizon.hpp"
#include "bsmpc/plant/model.hpp"

namespace bsmpc::ga {

using nmpc::HorizonSolution;
using nmpc::MarginVector;

/// `count` candidates; gene j of input i is uniform on
/// [center_j - ψⁱ/2, center_j + ψⁱ/2] ∩ [u_minⁱ, u_maxⁱ].
std::vector<HorizonSolution> sample_population(const HorizonSolution& center,
                                               const MarginVector& psi, int count,
                                               const plant::ModelSpec& spec, Rng& rng);

/// Fittest of the drawn indices; ties go to the lowest index.
std::size_t tournament_winner(std::span<const double> fitness, std::span<const std::size_t> draws);

/// Index of the fittest of `k` uniform draws with replacement; ties go to the
/// lowest index.
std::size_t tournament_select(std::span<const double> fitness, int k, Rng& rng);

/// Single-point crossover on the flattened genes, applied with probability `rate`.
std::pair<HorizonSolution, HorizonSolution> crossover(const HorizonSolution& a,
                                                      const HorizonSolution& b, double rate,
                                                      Rng& rng);

/// Each gene, with probability `rate`, gets N(0, (ψⁱ/6)²) noise and is clipped to bounds.
HorizonSolution mutate(HorizonSolution z, double rate, const MarginVector& psi,
                       const plant::ModelSpec& spec, Rng& rng);

}  // namespace bsmpc::ga
