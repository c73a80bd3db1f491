#include "bsmpc/ga/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "bsmpc/nmpc/cost.hpp"

namespace bsmpc::ga {

void GaConfig::validate() const {
  if (xi <= 0 || xi > nu) throw ConfigError("GaConfig: need 0 < xi <= nu");
  if (!(upsilon > 0.0 && upsilon <= 1.0)) throw ConfigError("GaConfig: upsilon must be in (0,1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ConfigError("GaConfig: crossover_rate must be in [0,1]");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw ConfigError("GaConfig: mutation_rate must be in [0,1]");
  }
  if (generations < 1) throw ConfigError("GaConfig: generations must be >= 1");
  if (tournament_size < 1) throw ConfigError("GaConfig: tournament_size must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("GaConfig: epsilon must be >= 0");
}

WarmStart WarmStart::from_previous(const HorizonSolution& prev_best, int n) {
  WarmStart w;
  w.center = nmpc::time_shift(prev_best, n);
  w.fallback = w.center;
  return w;
}

WarmStart WarmStart::bootstrap(const nmpc::CycleProblem& problem) {
  const auto& spec = problem.spec();
  HorizonSolution z(spec.h, spec.n);
  for (int k = 0; k < spec.h; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (kk < problem.refs.inputs.size()) {
      z.set_input(k, problem.refs.input(kk));
    } else {
      z.set_input(k, (spec.u_min + spec.u_max) / 2.0);
    }
  }
  nmpc::repair(z, spec, problem.u_prev);
  z.invalidate();
  return WarmStart{z, z};
}

CycleRun::CycleRun(const nmpc::CycleProblem& problem, const GaConfig& cfg, Clock& clock)
    : problem_(problem), cfg_(cfg), clock_(clock), evaluator_(problem) {}

bool CycleRun::time_left() const {
  if (cfg_.unlimited_time) return true;
  return clock_.elapsed() < cfg_.upsilon * problem_.spec().ts;
}

void CycleRun::evaluate(std::span<HorizonSolution> candidates) {
  evaluator_.evaluate_all(candidates);
  const std::size_t total = evaluator_.evaluations();
  clock_.charge(total - charged_);
  charged_ = total;
  for (const auto& z : candidates) {
    if (z.feasible != nmpc::Feasibility::kYes) continue;
    if (!has_best_ || z.cost < best_.cost) {
      best_ = z;
      has_best_ = true;
    }
  }
}

void CycleRun::record_generation() {
  history_.push_back(has_best_ ? best_.cost : INFINITY);
}

CycleOutcome CycleRun::finish(const WarmStart& warm, int generations_run, int population_size,
                              std::vector<HorizonSolution> ranked) {
  CycleOutcome out;
  const auto& spec = problem_.spec();
  out.generations_run = generations_run;
  out.population_size_used = population_size;
  out.budget_exhausted = generations_run < cfg_.generations && !reached_threshold();
  if (has_best_) {
    out.best = best_;
  } else {
    out.used_fallback = true;
    out.best = warm.fallback;
    out.best.invalidate();
    nmpc::repair(out.best, spec, problem_.u_prev);
    evaluator_.evaluate(out.best);
  }
  out.converged = has_best_ && best_.cost <= cfg_.epsilon;
  out.applied_input = out.best.input(0, spec.n);
  out.evaluations = evaluator_.evaluations();
  out.wall_time = clock_.elapsed();
  out.ranked = std::move(ranked);
  out.best_history = std::move(history_);
  return out;
}

void rank_population(std::vector<HorizonSolution>& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const HorizonSolution& a, const HorizonSolution& b) {
                     const bool fa = a.feasible == nmpc::Feasibility::kYes;
                     const bool fb = b.feasible == nmpc::Feasibility::kYes;
                     if (fa != fb) return fa;
                     const double ca = std::isnan(a.cost) ? INFINITY : a.cost;
                     const double cb = std::isnan(b.cost) ? INFINITY : b.cost;
                     return ca < cb;
                   });
}

CycleOutcome evolve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                    std::vector<HorizonSolution> population, const MarginVector& psi,
                    const GaConfig& cfg, Clock& clock, Rng& rng) {
  const auto& spec = problem.spec();
  const int p = static_cast<int>(population.size());
  CycleRun run(problem, cfg, clock);
  std::vector<HorizonSolution> ranked;
  std::vector<double> fit;
  int g = 0;
  while (g < cfg.generations && run.time_left()) {
    for (auto& z : population) nmpc::repair(z, spec, problem.u_prev);
    run.evaluate(population);
    ++g;
    run.record_generation();
    rank_population(population);
    ranked = population;
    if (run.reached_threshold() || g == cfg.generations || p == 0) break;

    fit.resize(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      fit[i] = population[i].feasible == nmpc::Feasibility::kYes ? nmpc::fitness(population[i].cost)
                                                                 : 0.0;
    }
    std::vector<HorizonSolution> next;
    next.reserve(population.size());
    if (run.has_best()) next.push_back(run.best());
    while (static_cast<int>(next.size()) < p) {
      const auto& a = population[tournament_select(fit, cfg.tournament_size, rng)];
      const auto& b = population[tournament_select(fit, cfg.tournament_size, rng)];
      auto [c1, c2] = crossover(a, b, cfg.crossover_rate, rng);
      next.push_back(mutate(std::move(c1), cfg.mutation_rate, psi, spec, rng));
      if (static_cast<int>(next.size()) < p) {
        next.push_back(mutate(std::move(c2), cfg.mutation_rate, psi, spec, rng));
      }
    }
    population = std::move(next);
  }
  return run.finish(warm, g, p, std::move(ranked));
}

CycleOutcome solve_cycle(const nmpc::CycleProblem& problem, const WarmStart& warm,
                         const MarginVector& psi, int population, const GaConfig& cfg,
                         Clock& clock, Rng& rng) {
  clock.restart();
  auto pop = sample_population(warm.center, psi, population, problem.spec(), rng);
  return evolve(problem, warm, std::move(pop), psi, cfg, clock, rng);
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kOG: return "OG";
    case SolverKind::kMG: return "MG";
    case SolverKind::kPSO: return "PSO";
    case SolverKind::kDE: return "DE";
    case SolverKind::kProposed: return "proposed";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view tag) {
  std::string t(tag);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (t == "og") return SolverKind::kOG;
  if (t == "mg") return SolverKind::kMG;
  if (t == "pso") return SolverKind::kPSO;
  if (t == "de") return SolverKind::kDE;
  if (t == "proposed" || t == "bsm") return SolverKind::kProposed;
  throw ConfigError("unknown solver '" + std::string(tag) + "'");
}

}  // namespace bsmpc::ga
