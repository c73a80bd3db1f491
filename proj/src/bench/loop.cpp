#include "bsmpc/bench/loop.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "bsmpc/baselines/solvers.hpp"
#include "bsmpc/bsm/proposed.hpp"
#include "bsmpc/dataset/references.hpp"
#include "bsmpc/nmpc/cost.hpp"
#include "bsmpc/plant/noise.hpp"

namespace bsmpc::bench {

PlantSim::PlantSim(const plant::Model& model, StateVector x0, plant::NoiseConfig noise,
                   std::uint64_t seed)
    : model_(model),
      x_(std::move(x0)),
      noise_(noise),
      input_rng_(make_stream(seed, "plant-input")),
      sensor_rng_(make_stream(seed, "plant-sensor")) {
  noise_.validate();
  model_.spec().check_state(x_, "initial state");
}

StateVector PlantSim::measure() {
  return plant::perturb_measurement(x_, model_.spec(), noise_, sensor_rng_);
}

void PlantSim::apply(const InputVector& u) {
  const InputVector actual = plant::perturb_input(u, model_.spec(), noise_, input_rng_);
  x_ = model_.step(x_, actual);
}

const StateVector& PlantSim::true_state() const {
  ++reads_;
  return x_;
}

Controller::Controller(const plant::Model& model, std::unique_ptr<ga::CycleSolver> solver,
                       std::unique_ptr<ga::Clock> clock, std::uint64_t seed)
    : model_(model), solver_(std::move(solver)), clock_(std::move(clock)), seed_(seed) {
  if (!solver_ || !clock_) throw ConfigError("controller: solver and clock are required");
}

InputVector Controller::step(const StateVector& measured, const nmpc::ReferenceTrack& window) {
  const auto& spec = model_.spec();
  log_ = CycleLog{};
  log_.cycle = cycle_;

  StateVector error = StateVector::Zero(spec.m);
  if (have_prev_) {
    try {
      const StateVector expected = model_.step(prev_measured_, u_prev_);
      error = nmpc::error_vector(measured, expected, spec);
    } catch (const Error&) {
      // model prediction failed; treat the cycle as error-free
    }
  } else {
    u_prev_ = window.input(0);
  }
  log_.error_max = spec.m > 0 ? error.maxCoeff() : 0.0;

  nmpc::CycleProblem problem;
  problem.model = &model_;
  problem.x0 = measured;
  problem.refs = window;
  problem.u_prev = u_prev_;
  problem.terminal = nmpc::TerminalSet::unbounded(spec.m);

  const ga::WarmStart warm = have_prev_ ? ga::WarmStart::from_previous(prev_best_, spec.n)
                                        : ga::WarmStart::bootstrap(problem);
  const ga::CycleContext ctx{cycle_, error};
  Rng rng = make_stream(seed_, "solver", cycle_);

  ga::CycleOutcome out;
  try {
    out = solver_->solve(problem, warm, ctx, *clock_, rng);
  } catch (const Error& e) {
    log_.error = e.what();
    const ga::GaConfig none;
    clock_->restart();
    ga::CycleRun run(problem, none, *clock_);
    out = run.finish(warm, 0, 0, {});
  }

  log_.cost = out.best.cost;
  log_.converged = out.converged;
  log_.fallback = out.used_fallback;
  log_.population = out.population_size_used;
  log_.generations = out.generations_run;
  log_.evaluations = out.evaluations;
  log_.time = out.wall_time;
  log_.confidence = solver_->last_confidence();
  const auto margin = solver_->last_margin();
  if (margin.widths.size() == spec.n) {
    const InputVector beta = spec.physical_margin();
    log_.margin_ratio = (margin.widths.array() / beta.array()).maxCoeff();
  }
  if (const auto* p = dynamic_cast<const bsm::ProposedSolver*>(solver_.get())) {
    log_.used_prediction = p->last_used_prediction();
    log_.kernel_evaluations = p->last_kernel_evaluations();
  }

  prev_best_ = out.best;
  have_prev_ = true;
  prev_measured_ = measured;
  u_prev_ = out.applied_input;
  ++cycle_;
  return out.applied_input;
}

std::unique_ptr<plant::Model> build_model(const ExperimentConfig& cfg) {
  auto model = plant::make_model(cfg.model);
  if (!cfg.model_params.empty()) model->set_params(cfg.model_params);
  return model;
}

nmpc::ReferenceTrack run_references(const plant::Model& model, const ExperimentConfig& cfg,
                                    std::uint64_t seed) {
  dataset::ReferenceGenConfig r = cfg.references;
  r.horizon = model.spec().h;
  r.cycles = std::max(cfg.cycles, r.horizon + 2);
  r.seed = seed;
  Rng rng = make_stream(seed, "references");
  return dataset::generate_references(model, r, rng);
}

std::unique_ptr<ga::Clock> make_clock(const ExperimentConfig& cfg) {
  if (cfg.clock == "wall") return std::make_unique<ga::WallClock>();
  return std::make_unique<ga::CountingClock>(cfg.seconds_per_evaluation);
}

std::unique_ptr<ga::CycleSolver> build_solver(
    const ExperimentConfig& cfg, const plant::ModelSpec& spec,
    std::shared_ptr<const bsm::MarginPredictor> predictor) {
  baselines::SolverSettings s;
  s.ga = cfg.ga;
  s.pso = cfg.pso;
  s.de = cfg.de;
  s.bsm.eta = cfg.eta;
  s.bsm.epsilon = cfg.ga.epsilon;
  s.bsm.beta = spec.physical_margin();
  s.bsm.nu = cfg.ga.nu;
  s.bsm.xi = cfg.ga.xi;
  if (cfg.solver == ga::SolverKind::kProposed) {
    if (!predictor) throw ConfigError("proposed solver needs a trained margin predictor");
    if (cfg.calibrated_gate) {
      if (!predictor->calibrated()) throw ConfigError("predictor has no calibration data");
      s.bsm.confidence_threshold = predictor->threshold_for(cfg.eta);
    }
  }
  s.predictor = std::move(predictor);
  return baselines::make_solver(cfg.solver, s);
}

RunResult run_closed_loop(const ExperimentConfig& cfg, std::uint64_t seed,
                          std::shared_ptr<const bsm::MarginPredictor> predictor) {
  cfg.validate();
  auto model = build_model(cfg);
  const auto& spec = model->spec();
  const auto refs = run_references(*model, cfg, seed);

  RunResult res;
  res.model = cfg.model;
  res.solver = std::string(ga::to_string(cfg.solver));
  res.seed = seed;

  PlantSim plant(*model, refs.state(0), cfg.noise, seed);
  Controller controller(*model, build_solver(cfg, spec, std::move(predictor)), make_clock(cfg),
                        seed);
  const auto h = static_cast<std::size_t>(spec.h);
  for (std::size_t c = 0; c < static_cast<std::size_t>(cfg.cycles); ++c) {
    const InputVector u = controller.step(plant.measure(), refs.window(c, h + 1));
    res.cycles.push_back(controller.last_log());
    if (!res.cycles.back().error.empty()) {
      res.log.push_back("cycle " + std::to_string(c) + ": solver error: " + res.cycles.back().error);
    }
    if (c + 1 == static_cast<std::size_t>(cfg.cycles)) break;
    try {
      plant.apply(u);
    } catch (const Error& e) {
      res.plant_failed = true;
      res.log.push_back("cycle " + std::to_string(c) + ": plant stopped: " + e.what());
      break;
    }
  }
  res.true_state_reads = plant.true_state_reads();
  res.metrics = compute_metrics(res.cycles, cfg.ga.xi, cfg.ga.nu);
  return res;
}

std::vector<RunResult> run_all(const ExperimentConfig& cfg,
                               std::shared_ptr<const bsm::MarginPredictor> predictor) {
  cfg.validate();
  const std::size_t runs = cfg.seeds.size();
  std::vector<RunResult> out(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        out[i] = run_closed_loop(cfg, cfg.seeds[i], predictor);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, runs);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace bsmpc::bench
