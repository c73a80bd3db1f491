#include "bsmpc/baselines/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bsmpc/nmpc/feasibility.hpp"

namespace bsmpc::baselines {

namespace {

double cost_or_inf(const HorizonSolution& z) { return std::isnan(z.cost) ? INFINITY : z.cost; }

bool feasible(const HorizonSolution& z) { return z.feasible == nmpc::Feasibility::kYes; }

/// a is at least as good as b: feasible first, then lower cost.
bool no_worse(const HorizonSolution& a, const HorizonSolution& b) {
  if (feasible(a) != feasible(b)) return feasible(a);
  return cost_or_inf(a) <= cost_or_inf(b);
}

void clip_to_box(HorizonSolution& z, const plant::ModelSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.n);
  for (std::size_t j = 0; j < z.genes.size(); ++j) {
    const int i = static_cast<int>(j % n);
    z.genes[j] = std::clamp(z.genes[j], spec.u_min[i], spec.u_max[i]);
  }
}

std::vector<HorizonSolution> ranked_copy(std::vector<HorizonSolution> pop) {
  ga::rank_population(pop);
  return pop;
}

}  // namespace

void PsoConfig::validate() const {
  if (!(w >= 0.0) || !(c1 >= 0.0) || !(c2 >= 0.0)) {
    throw ConfigError("pso: w, c1 and c2 must be non-negative");
  }
}

void DeConfig::validate() const {
  if (!(F >= 0.0 && F <= 2.0)) throw ConfigError("de: F must lie in [0, 2]");
  if (!(CR >= 0.0 && CR <= 1.0)) throw ConfigError("de: CR must lie in [0, 1]");
}

CycleOutcome og_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const ga::GaConfig& cfg, ga::Clock& clock, Rng& rng) {
  cfg.validate();
  const MarginVector beta(problem.spec().physical_margin());
  return ga::solve_cycle(problem, warm, beta, cfg.nu, cfg, clock, rng);
}

std::vector<HorizonSolution> mg_population(const WarmStart& warm,
                                           const std::vector<HorizonSolution>& previous_ranked,
                                           int p, const plant::ModelSpec& spec, Rng& rng) {
  if (p < 1) throw ConfigError("mg: population must be positive");
  const int shifted = std::min(p / 5, static_cast<int>(previous_ranked.size()));
  const MarginVector beta(spec.physical_margin());
  auto pop = ga::sample_population(warm.center, beta, p - shifted, spec, rng);
  for (int k = 0; k < shifted; ++k) {
    pop.push_back(nmpc::time_shift(previous_ranked[static_cast<std::size_t>(k)], spec.n));
  }
  return pop;
}

CycleOutcome mg_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const std::vector<HorizonSolution>& previous_ranked,
                      const ga::GaConfig& cfg, ga::Clock& clock, Rng& rng) {
  cfg.validate();
  const auto& spec = problem.spec();
  clock.restart();
  auto pop = mg_population(warm, previous_ranked, cfg.nu, spec, rng);
  return ga::evolve(problem, warm, std::move(pop), MarginVector(spec.physical_margin()), cfg,
                    clock, rng);
}

CycleOutcome pso_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                       const ga::GaConfig& cfg, const PsoConfig& pso, ga::Clock& clock,
                       Rng& rng) {
  cfg.validate();
  pso.validate();
  const auto& spec = problem.spec();
  const int p = cfg.nu;
  const InputVector beta = spec.physical_margin();
  clock.restart();
  ga::CycleRun run(problem, cfg, clock);

  auto x = ga::sample_population(warm.center, MarginVector(beta), p, spec, rng);
  const std::size_t genes = warm.center.genes.size();
  std::vector<std::vector<double>> vel(x.size(), std::vector<double>(genes, 0.0));
  std::vector<HorizonSolution> pbest;
  HorizonSolution gbest;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(spec.n);

  int g = 0;
  while (g < cfg.generations && run.time_left()) {
    for (auto& z : x) nmpc::repair(z, spec, problem.u_prev);
    run.evaluate(x);
    ++g;
    run.record_generation();
    if (pbest.empty()) {
      pbest = x;
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (no_worse(x[i], pbest[i])) pbest[i] = x[i];
      }
    }
    gbest = pbest.front();
    for (const auto& b : pbest) {
      if (!no_worse(gbest, b)) gbest = b;
    }
    if (run.reached_threshold() || g == cfg.generations) break;

    for (std::size_t i = 0; i < x.size(); ++i) {
      bool moved = false;
      for (std::size_t j = 0; j < genes; ++j) {
        const double vmax = beta[static_cast<int>(j % n)];
        const double r1 = unit(rng), r2 = unit(rng);
        double v = pso.w * vel[i][j] + pso.c1 * r1 * (pbest[i].genes[j] - x[i].genes[j]) +
                   pso.c2 * r2 * (gbest.genes[j] - x[i].genes[j]);
        v = std::clamp(v, -vmax, vmax);
        vel[i][j] = v;
        if (v != 0.0) {
          x[i].genes[j] += v;
          moved = true;
        }
      }
      if (moved) {
        clip_to_box(x[i], spec);
        x[i].invalidate();
      }
    }
  }
  return run.finish(warm, g, p, ranked_copy(x));
}

CycleOutcome de_solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                      const ga::GaConfig& cfg, const DeConfig& de, ga::Clock& clock, Rng& rng) {
  cfg.validate();
  de.validate();
  const int p = cfg.nu;
  if (p < 4) throw ConfigError("de: population must be at least 4");
  const auto& spec = problem.spec();
  clock.restart();
  ga::CycleRun run(problem, cfg, clock);

  auto pop = ga::sample_population(warm.center, MarginVector(spec.physical_margin()), p, spec,
                                   rng);
  for (auto& z : pop) nmpc::repair(z, spec, problem.u_prev);
  run.evaluate(pop);
  int g = 1;
  run.record_generation();

  const std::size_t genes = warm.center.genes.size();
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_gene(0, genes - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<HorizonSolution> trials(pop.size());

  while (g < cfg.generations && run.time_left() && !run.reached_threshold()) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
      std::size_t r1, r2, r3;
      do { r1 = pick(rng); } while (r1 == i);
      do { r2 = pick(rng); } while (r2 == i || r2 == r1);
      do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t j_rand = pick_gene(rng);
      HorizonSolution trial = pop[i];
      bool changed = false;
      for (std::size_t j = 0; j < genes; ++j) {
        const bool take = unit(rng) < de.CR || (de.CR > 0.0 && j == j_rand);
        if (!take) continue;
        const double v = pop[r1].genes[j] + de.F * (pop[r2].genes[j] - pop[r3].genes[j]);
        if (v != trial.genes[j]) {
          trial.genes[j] = v;
          changed = true;
        }
      }
      if (changed) {
        clip_to_box(trial, spec);
        nmpc::repair(trial, spec, problem.u_prev);
        trial.invalidate();
      }
      trials[i] = std::move(trial);
    }
    run.evaluate(trials);
    ++g;
    run.record_generation();
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (no_worse(trials[i], pop[i])) pop[i] = trials[i];
    }
  }
  return run.finish(warm, g, p, ranked_copy(pop));
}

CycleOutcome OgSolver::solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                             const CycleContext&, ga::Clock& clock, Rng& rng) {
  margin_ = MarginVector(problem.spec().physical_margin());
  return og_solve(problem, warm, cfg_, clock, rng);
}

CycleOutcome MgSolver::solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                             const CycleContext&, ga::Clock& clock, Rng& rng) {
  margin_ = MarginVector(problem.spec().physical_margin());
  auto out = mg_solve(problem, warm, ranked_, cfg_, clock, rng);
  ranked_ = out.ranked;
  return out;
}

CycleOutcome PsoSolver::solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                              const CycleContext&, ga::Clock& clock, Rng& rng) {
  margin_ = MarginVector(problem.spec().physical_margin());
  return pso_solve(problem, warm, cfg_, pso_, clock, rng);
}

CycleOutcome DeSolver::solve(const nmpc::CycleProblem& problem, const WarmStart& warm,
                             const CycleContext&, ga::Clock& clock, Rng& rng) {
  margin_ = MarginVector(problem.spec().physical_margin());
  return de_solve(problem, warm, cfg_, de_, clock, rng);
}

std::unique_ptr<ga::CycleSolver> make_solver(ga::SolverKind kind, const SolverSettings& s) {
  s.ga.validate();
  switch (kind) {
    case ga::SolverKind::kOG:
      return std::make_unique<OgSolver>(s.ga);
    case ga::SolverKind::kMG:
      return std::make_unique<MgSolver>(s.ga);
    case ga::SolverKind::kPSO:
      s.pso.validate();
      return std::make_unique<PsoSolver>(s.ga, s.pso);
    case ga::SolverKind::kDE:
      s.de.validate();
      if (s.ga.nu < 4) throw ConfigError("de: population must be at least 4");
      return std::make_unique<DeSolver>(s.ga, s.de);
    case ga::SolverKind::kProposed:
      return std::make_unique<bsm::ProposedSolver>(s.predictor, s.bsm, s.ga);
  }
  throw ConfigError("unknown solver kind");
}

}  // namespace bsmpc::baselines
