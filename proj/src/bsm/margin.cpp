#include "bsmpc/bsm/margin.hpp"

#include <algorithm>

namespace bsmpc::bsm {

void BsmConfig::validate() const {
  if (beta.size() == 0) throw ConfigError("bsm: physical margins are empty");
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (!(beta[i] > 0.0)) throw ConfigError("bsm: physical margins must be positive");
  }
  if (!(eta >= 0.0)) throw ConfigError("bsm: eta must be non-negative");
  if (xi <= 0 || xi > nu) throw ConfigError("bsm: need 0 < xi <= nu");
}

double overall_confidence(std::span<const double> per_input) {
  if (per_input.empty()) throw DimensionError("overall_confidence: no inputs");
  double s = 0.0;
  for (double c : per_input) s += c;
  return s / static_cast<double>(per_input.size());
}

MarginVector select_margin(const MarginVector& predicted, double overall, double j_prev1,
                           double j_prev2, const BsmConfig& cfg) {
  const bool improving = j_prev1 <= j_prev2 || j_prev1 < cfg.epsilon;
  if (improving && overall > cfg.gate()) return predicted;
  return MarginVector(cfg.beta);
}

int population_size(const MarginVector& psi, const BsmConfig& cfg) {
  if (psi.size() != cfg.beta.size()) throw DimensionError("population_size: margin size mismatch");
  double alpha = 0.0;
  for (int i = 0; i < psi.size(); ++i) alpha = std::max(alpha, psi[i] / cfg.beta[i]);
  const double raw = std::floor(cfg.nu * alpha);
  const int p = raw >= cfg.nu ? cfg.nu : static_cast<int>(raw);
  return std::clamp(p, cfg.xi, cfg.nu);
}

MarginVector clamp_margin(const MarginVector& m, const InputVector& beta) {
  if (m.size() != beta.size()) throw DimensionError("clamp_margin: size mismatch");
  InputVector w(m.size());
  for (int i = 0; i < m.size(); ++i) {
    w[i] = std::isnan(m[i]) ? beta[i] : std::clamp(m[i], 0.0, beta[i]);
  }
  return MarginVector(w);
}

MarginVector bsm_from_solutions(const HorizonSolution& current, const HorizonSolution& previous,
                                const plant::ModelSpec& spec, Alignment alignment) {
  const auto expected = static_cast<std::size_t>(spec.h * spec.n);
  if (current.genes.size() != expected || previous.genes.size() != expected) {
    throw DimensionError("bsm_from_solutions: solutions must have h*n genes");
  }
  const int shift = alignment == Alignment::kSameTime ? 1 : 0;
  InputVector delta = InputVector::Zero(spec.n);
  for (int k = 0; k + shift < spec.h; ++k) {
    for (int i = 0; i < spec.n; ++i) {
      const double a = current.genes[static_cast<std::size_t>(k * spec.n + i)];
      const double b = previous.genes[static_cast<std::size_t>((k + shift) * spec.n + i)];
      delta[i] = std::max(delta[i], std::abs(a - b));
    }
  }
  return MarginVector(delta);
}

}  // namespace bsmpc::bsm
