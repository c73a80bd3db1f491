#include "bsmpc/bench/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bsmpc::bench {

using nlohmann::ordered_json;

void ExperimentConfig::validate() const {
  if (cycles < 1) throw ConfigError("config: cycles (H) must be >= 1");
  if (seeds.empty()) throw ConfigError("config: at least one seed is required");
  noise.validate();
  training_noise.validate();
  ga.validate();
  pso.validate();
  de.validate();
  if (solver == ga::SolverKind::kDE && ga.nu < 4) throw ConfigError("config: DE needs nu >= 4");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("config: eta must lie in [0, 1]");
  if (clock != "counting" && clock != "wall") {
    throw ConfigError("config: clock must be 'counting' or 'wall'");
  }
  if (!(seconds_per_evaluation >= 0.0)) {
    throw ConfigError("config: seconds_per_evaluation must be >= 0");
  }
  if (dataset_runs < 1) throw ConfigError("config: dataset_runs must be >= 1");
  if (dataset_cycles < 3) throw ConfigError("config: dataset_cycles must be >= 3");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("config: validation_fraction must lie in [0, 1)");
  }
  if (svr_C.size() != svr_lambda.size() || svr_C.size() != svr_gamma.size()) {
    throw ConfigError("config: svr C, lambda and gamma need one entry per input");
  }
  if (solver == ga::SolverKind::kProposed && !predictor_path.empty()) {
    std::ifstream f(predictor_path);
    if (!f) throw ConfigError("config: predictor file '" + predictor_path + "' not found");
  }
}

ExperimentConfig defaults_for(std::string_view model) {
  ExperimentConfig c;
  c.model = std::string(model);
  auto& g = c.ga;
  g.upsilon = 0.95;
  g.tournament_size = 3;
  if (model == "uav") {
    c.cycles = 5000;
    g.epsilon = 0.4;
    c.eta = 0.7;
    c.noise = {0.1, 0.05, 0};
    g.nu = 100;
    g.xi = 10;
    g.generations = 3;
    g.crossover_rate = 0.4;
    g.mutation_rate = 0.05;
    c.svr_lambda = {0.2, 0.2, 0.2, 0.2};
    c.svr_gamma = {0.1, 0.2, 0.2, 0.05};
    c.svr_C = {10, 5, 5, 10};
    c.seconds_per_evaluation = 18.8e-3 / 300.0;
  } else if (model == "vehicle") {
    c.cycles = 5000;
    g.epsilon = 2.0;
    c.eta = 0.65;
    c.noise = {0.1, 0.15, 0};
    g.nu = 200;
    g.xi = 20;
    g.generations = 5;
    g.crossover_rate = 0.5;
    g.mutation_rate = 0.1;
    c.svr_lambda = {0.1, 0.35};
    c.svr_gamma = {0.05, 0.01};
    c.svr_C = {1, 2};
    c.seconds_per_evaluation = 38.9e-3 / 1000.0;
  } else if (model == "sfjr") {
    c.cycles = 4000;
    g.epsilon = 0.5;
    c.eta = 0.8;
    c.noise = {0.2, 0.15, 0};
    g.nu = 200;
    g.xi = 20;
    g.generations = 4;
    g.crossover_rate = 0.4;
    g.mutation_rate = 0.1;
    c.svr_lambda = {0.5};
    c.svr_gamma = {0.2};
    c.svr_C = {5};
    c.seconds_per_evaluation = 38.9e-3 / 800.0;
  } else {
    throw ConfigError("config: unknown model '" + std::string(model) + "'");
  }
  c.training_noise = c.noise;
  return c;
}

namespace {

template <typename T>
void get(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_noise(const ordered_json& j, plant::NoiseConfig& n) {
  get(j, "rho", n.rho);
  get(j, "theta", n.theta);
}

void check_keys(const ordered_json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + where);
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j,
             {"model", "solver", "cycles", "seeds", "noise", "training_noise", "ga", "bsm", "pso",
              "de", "svr", "references", "dataset", "clock", "model_params", "predictor",
              "dataset_path", "out"},
             "config");
  try {
    ExperimentConfig c = defaults_for(j.value("model", std::string("sfjr")));
    if (j.contains("solver")) c.solver = ga::parse_solver_kind(j.at("solver").get<std::string>());
    get(j, "cycles", c.cycles);
    get(j, "seeds", c.seeds);
    if (j.contains("noise")) read_noise(j.at("noise"), c.noise);
    if (j.contains("training_noise")) read_noise(j.at("training_noise"), c.training_noise);
    if (j.contains("ga")) {
      const auto& g = j.at("ga");
      check_keys(g,
                 {"nu", "xi", "generations", "crossover_rate", "mutation_rate", "epsilon",
                  "upsilon", "tournament_size"},
                 "ga");
      get(g, "nu", c.ga.nu);
      get(g, "xi", c.ga.xi);
      get(g, "generations", c.ga.generations);
      get(g, "crossover_rate", c.ga.crossover_rate);
      get(g, "mutation_rate", c.ga.mutation_rate);
      get(g, "epsilon", c.ga.epsilon);
      get(g, "upsilon", c.ga.upsilon);
      get(g, "tournament_size", c.ga.tournament_size);
    }
    if (j.contains("bsm")) {
      check_keys(j.at("bsm"), {"eta", "calibrated_gate"}, "bsm");
      get(j.at("bsm"), "eta", c.eta);
      get(j.at("bsm"), "calibrated_gate", c.calibrated_gate);
    }
    if (j.contains("pso")) {
      get(j.at("pso"), "w", c.pso.w);
      get(j.at("pso"), "c1", c.pso.c1);
      get(j.at("pso"), "c2", c.pso.c2);
    }
    if (j.contains("de")) {
      get(j.at("de"), "F", c.de.F);
      get(j.at("de"), "CR", c.de.CR);
    }
    if (j.contains("svr")) {
      get(j.at("svr"), "C", c.svr_C);
      get(j.at("svr"), "lambda", c.svr_lambda);
      get(j.at("svr"), "gamma", c.svr_gamma);
    }
    if (j.contains("references")) {
      const auto& r = j.at("references");
      get(r, "amplitude", c.references.amplitude);
      get(r, "slow_period_min", c.references.slow_period_min);
      get(r, "slow_period_max", c.references.slow_period_max);
      get(r, "fast_period_min", c.references.fast_period_min);
      get(r, "fast_period_max", c.references.fast_period_max);
      get(r, "step_rate", c.references.step_rate);
      get(r, "step_weight", c.references.step_weight);
      get(r, "slew", c.references.slew);
    }
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      get(d, "seed", c.training_seed);
      get(d, "runs", c.dataset_runs);
      get(d, "cycles", c.dataset_cycles);
      get(d, "validation_fraction", c.validation_fraction);
    }
    if (j.contains("clock")) {
      get(j.at("clock"), "kind", c.clock);
      get(j.at("clock"), "seconds_per_evaluation", c.seconds_per_evaluation);
    }
    get(j, "model_params", c.model_params);
    get(j, "predictor", c.predictor_path);
    get(j, "dataset_path", c.dataset_path);
    get(j, "out", c.output_dir);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const ExperimentConfig& c, int indent) {
  ordered_json j;
  j["model"] = c.model;
  j["solver"] = std::string(ga::to_string(c.solver));
  j["cycles"] = c.cycles;
  j["seeds"] = c.seeds;
  j["noise"] = {{"rho", c.noise.rho}, {"theta", c.noise.theta}};
  j["training_noise"] = {{"rho", c.training_noise.rho}, {"theta", c.training_noise.theta}};
  j["ga"] = {{"nu", c.ga.nu},
             {"xi", c.ga.xi},
             {"generations", c.ga.generations},
             {"crossover_rate", c.ga.crossover_rate},
             {"mutation_rate", c.ga.mutation_rate},
             {"epsilon", c.ga.epsilon},
             {"upsilon", c.ga.upsilon},
             {"tournament_size", c.ga.tournament_size}};
  j["bsm"] = {{"eta", c.eta}, {"calibrated_gate", c.calibrated_gate}};
  j["pso"] = {{"w", c.pso.w}, {"c1", c.pso.c1}, {"c2", c.pso.c2}};
  j["de"] = {{"F", c.de.F}, {"CR", c.de.CR}};
  j["svr"] = {{"C", c.svr_C}, {"lambda", c.svr_lambda}, {"gamma", c.svr_gamma}};
  const auto& r = c.references;
  j["references"] = {{"amplitude", r.amplitude},
                     {"slow_period_min", r.slow_period_min},
                     {"slow_period_max", r.slow_period_max},
                     {"fast_period_min", r.fast_period_min},
                     {"fast_period_max", r.fast_period_max},
                     {"step_rate", r.step_rate},
                     {"step_weight", r.step_weight},
                     {"slew", r.slew}};
  j["dataset"] = {{"seed", c.training_seed},
                  {"runs", c.dataset_runs},
                  {"cycles", c.dataset_cycles},
                  {"validation_fraction", c.validation_fraction}};
  j["clock"] = {{"kind", c.clock}, {"seconds_per_evaluation", c.seconds_per_evaluation}};
  j["model_params"] = c.model_params;
  j["predictor"] = c.predictor_path;
  j["dataset_path"] = c.dataset_path;
  j["out"] = c.output_dir;
  return j.dump(indent);
}

}  // namespace bsmpc::bench
