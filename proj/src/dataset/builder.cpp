#include "bsmpc/dataset/builder.hpp"

#include <sstream>

#include "bsmpc/ga/solver.hpp"
#include "bsmpc/nmpc/cost.hpp"

namespace bsmpc::dataset {

ga::GaConfig exhaustive_ga(const ga::GaConfig& base) {
  ga::GaConfig g = base;
  g.generations = 20;
  g.epsilon = 0.0;
  g.unlimited_time = true;
  return g;
}

DatasetResult build_dataset(const plant::Model& model, const nmpc::ReferenceTrack& refs,
                            const DatasetConfig& cfg) {
  const auto& spec = model.spec();
  cfg.noise.validate();
  cfg.ga.validate();
  if (cfg.population < 2) throw ConfigError("dataset: population must be >= 2");
  if (cfg.refine_stages < 0 || cfg.refine_population < 2 ||
      !(cfg.refine_shrink > 0.0 && cfg.refine_shrink < 1.0)) {
    throw ConfigError("dataset: invalid refinement settings");
  }
  if (refs.size() < static_cast<std::size_t>(spec.h) + 2) {
    throw ConfigError("dataset: reference track shorter than h + 2");
  }
  const std::size_t cycles = refs.size() - static_cast<std::size_t>(spec.h);

  Rng input_rng = make_stream(cfg.seed, "plant-input");
  Rng sensor_rng = make_stream(cfg.seed, "plant-sensor");
  const nmpc::MarginVector beta(spec.physical_margin());
  ga::CountingClock clock(0.0);

  DatasetResult out;
  StateVector x_true = refs.state(0);
  StateVector measured = x_true;
  InputVector u_prev = refs.input(0);
  nmpc::HorizonSolution prev_best;
  bool have_prev = false;

  for (std::size_t c = 0; c < cycles; ++c) {
    StateVector error = StateVector::Zero(spec.m);
    if (c > 0) {
      try {
        const InputVector u_applied = plant::perturb_input(u_prev, spec, cfg.noise, input_rng);
        x_true = model.step(x_true, u_applied);
        const StateVector expected = model.step(measured, u_prev);
        measured = plant::perturb_measurement(x_true, spec, cfg.noise, sensor_rng);
        error = nmpc::error_vector(measured, expected, spec);
      } catch (const Error& e) {
        out.plant_failed = true;
        out.log.push_back("cycle " + std::to_string(c) + ": plant stopped: " + e.what());
        break;
      }
    }
    out.cycles = c + 1;

    nmpc::CycleProblem problem;
    problem.model = &model;
    problem.x0 = measured;
    problem.refs = refs.window(c, static_cast<std::size_t>(spec.h) + 1);
    problem.u_prev = u_prev;
    problem.terminal = nmpc::TerminalSet::unbounded(spec.m);

    const ga::WarmStart warm = have_prev ? ga::WarmStart::from_previous(prev_best, spec.n)
                                         : ga::WarmStart::bootstrap(problem);
    Rng ga_rng = make_stream(cfg.seed, "dataset-ga", c);
    auto population = ga::sample_population(warm.center, beta, cfg.population, spec, ga_rng);
    if (cfg.seed_previous) {
      population.front() = warm.center;
      population.front().invalidate();
    }
    clock.restart();
    ga::CycleOutcome res =
        ga::evolve(problem, warm, std::move(population), beta, cfg.ga, clock, ga_rng);
    out.evaluations += res.evaluations;

    double shrink = 1.0;
    for (int stage = 0; stage < cfg.refine_stages && !res.used_fallback; ++stage) {
      shrink *= cfg.refine_shrink;
      const nmpc::MarginVector psi(beta.widths * shrink);
      auto pop = ga::sample_population(res.best, psi, cfg.refine_population, spec, ga_rng);
      pop.front() = res.best;
      clock.restart();
      auto fine = ga::evolve(problem, warm, std::move(pop), psi, cfg.ga, clock, ga_rng);
      out.evaluations += fine.evaluations;
      if (!fine.used_fallback && fine.best.cost <= res.best.cost) {
        res.best = fine.best;
        res.applied_input = fine.applied_input;
      }
    }

    if (res.used_fallback) {
      if (c > 0) ++out.skipped;
      out.log.push_back("cycle " + std::to_string(c) + ": no feasible solution, skipped");
    } else if (have_prev) {
      const nmpc::MarginVector d = bsm::bsm_from_solutions(res.best, prev_best, spec, cfg.alignment);
      out.records.push_back(CycleRecord{error, d.widths});
    }
    prev_best = res.best;
    have_prev = true;
    u_prev = res.applied_input;
  }
  return out;
}

}  // namespace bsmpc::dataset
