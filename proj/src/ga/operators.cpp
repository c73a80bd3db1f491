#include "bsmpc/ga/operators.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace bsmpc::ga {

namespace {
constexpr int kMaxTournament = 1024;
}  // namespace

std::vector<HorizonSolution> sample_population(const HorizonSolution& center,
                                               const MarginVector& psi, int count,
                                               const plant::ModelSpec& spec, Rng& rng) {
  const int n = spec.n;
  if (psi.size() != n) throw DimensionError("sample_population: margin has wrong size");
  if (center.genes.size() % static_cast<std::size_t>(n) != 0) {
    throw DimensionError("sample_population: center gene count is not a multiple of n");
  }
  if (count < 0) throw ConfigError("sample_population: negative population size");
  std::vector<HorizonSolution> out;
  out.reserve(static_cast<std::size_t>(count));
  const std::size_t len = center.genes.size();
  for (int s = 0; s < count; ++s) {
    HorizonSolution z(std::vector<double>(len, 0.0));
    for (std::size_t j = 0; j < len; ++j) {
      const int i = static_cast<int>(j % static_cast<std::size_t>(n));
      const double c = center.genes[j];
      const double lo = std::max(c - psi[i] / 2.0, spec.u_min[i]);
      const double hi = std::min(c + psi[i] / 2.0, spec.u_max[i]);
      if (!(lo < hi)) {
        z.genes[j] = std::clamp(c, spec.u_min[i], spec.u_max[i]);
      } else {
        z.genes[j] = std::uniform_real_distribution<double>(lo, hi)(rng);
      }
    }
    out.push_back(std::move(z));
  }
  return out;
}

std::size_t tournament_winner(std::span<const double> fitness,
                              std::span<const std::size_t> draws) {
  if (draws.empty()) throw ConfigError("tournament_winner: no draws");
  std::size_t best = draws.front();
  for (std::size_t idx : draws.subspan(1)) {
    if (fitness[idx] > fitness[best] || (fitness[idx] == fitness[best] && idx < best)) best = idx;
  }
  return best;
}

std::size_t tournament_select(std::span<const double> fitness, int k, Rng& rng) {
  if (fitness.empty()) throw ConfigError("tournament_select: empty population");
  if (k < 1) throw ConfigError("tournament_select: tournament size must be >= 1");
  if (k > kMaxTournament) throw ConfigError("tournament_select: tournament size too large");
  std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
  std::array<std::size_t, kMaxTournament> draws{};
  for (int t = 0; t < k; ++t) draws[static_cast<std::size_t>(t)] = pick(rng);
  return tournament_winner(fitness, std::span(draws.data(), static_cast<std::size_t>(k)));
}

std::pair<HorizonSolution, HorizonSolution> crossover(const HorizonSolution& a,
                                                      const HorizonSolution& b, double rate,
                                                      Rng& rng) {
  if (a.genes.size() != b.genes.size()) {
    throw DimensionError("crossover: parents have different gene counts");
  }
  std::pair<HorizonSolution, HorizonSolution> children{a, b};
  const std::size_t len = a.genes.size();
  if (std::bernoulli_distribution(rate)(rng) && len >= 2) {
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, len - 1)(rng);
    bool changed = false;
    for (std::size_t j = cut; j < len; ++j) {
      std::swap(children.first.genes[j], children.second.genes[j]);
      changed = changed || a.genes[j] != b.genes[j];
    }
    if (changed) {
      children.first.invalidate();
      children.second.invalidate();
    }
  }
  return children;
}

HorizonSolution mutate(HorizonSolution z, double rate, const MarginVector& psi,
                       const plant::ModelSpec& spec, Rng& rng) {
  const int n = spec.n;
  if (psi.size() != n) throw DimensionError("mutate: margin has wrong size");
  std::bernoulli_distribution hit(rate);
  std::normal_distribution<double> unit(0.0, 1.0);
  bool changed = false;
  for (std::size_t j = 0; j < z.genes.size(); ++j) {
    if (!hit(rng)) continue;
    const int i = static_cast<int>(j % static_cast<std::size_t>(n));
    const double sigma = psi[i] / 6.0;
    if (!(sigma > 0.0)) continue;
    const double g = std::clamp(z.genes[j] + sigma * unit(rng), spec.u_min[i], spec.u_max[i]);
    if (g != z.genes[j]) {
      z.genes[j] = g;
      changed = true;
    }
  }
  if (changed) z.invalidate();
  return z;
}

}  // namespace bsmpc::ga
