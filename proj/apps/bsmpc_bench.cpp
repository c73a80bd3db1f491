#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bsmpc/bench/pipeline.hpp"
#include "bsmpc/bench/report.hpp"
#include "bsmpc/dataset/io.hpp"
#include "bsmpc/dataset/references.hpp"

using namespace bsmpc;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string model;
  std::string solver;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> cycles;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--model", c.model, "uav, vehicle or sfjr")
      ->check(CLI::IsMember({"uav", "vehicle", "sfjr"}));
  cmd->add_option("--solver", c.solver, "og, mg, pso, de or proposed")
      ->check(CLI::IsMember({"og", "mg", "pso", "de", "proposed"}, CLI::ignore_case));
  cmd->add_option("--seed", c.seed, "run seed (replaces the seed list)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--cycles", c.cycles, "control cycles H")->check(CLI::PositiveNumber);
}

bench::ExperimentConfig resolve(const Common& c) {
  bench::ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = bench::load_config(c.config);
    if (!c.model.empty() && c.model != cfg.model) {
      throw ConfigError("--model disagrees with the config file");
    }
  } else {
    cfg = bench::defaults_for(c.model.empty() ? "sfjr" : c.model);
  }
  if (!c.solver.empty()) cfg.solver = ga::parse_solver_kind(c.solver);
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.cycles) cfg.cycles = *c.cycles;
  return cfg;
}

fs::path out_file(const bench::ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return fs::path(cfg.output_dir) / name;
}

void print_summary(const std::vector<bench::RunResult>& runs) {
  for (const auto& r : runs) {
    std::cout << r.solver << " seed " << r.seed << ": E " << r.metrics.avg_cost << ", rate "
              << r.metrics.convergence_rate << ", evals/cycle " << r.metrics.avg_evaluations
              << ", time/cycle " << r.metrics.avg_time << " s"
              << (r.plant_failed ? " (plant stopped)" : "") << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop NMPC benchmark with learned search-space margins"};
  app.require_subcommand(1);
  Common c;

  auto* refs = app.add_subcommand("gen-refs", "write a reference track (references.csv)");
  add_common(refs, c);

  auto* gen = app.add_subcommand("gen-dataset", "write a training dataset (dataset.csv)");
  add_common(gen, c);
  int runs = 0;
  gen->add_option("--runs", runs, "dataset runs")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "train and calibrate the margin predictor");
  add_common(train, c);
  std::string dataset_path;
  train->add_option("--dataset", dataset_path, "dataset CSV (default: generate one)");

  auto* run = app.add_subcommand("run", "closed-loop runs, one per seed");
  add_common(run, c);
  std::string predictor_path;
  run->add_option("--predictor", predictor_path, "trained predictor file");

  auto* sw = app.add_subcommand("sweep", "runs over a parameter grid");
  add_common(sw, c);
  std::string parameter;
  std::vector<double> values;
  sw->add_option("--param", parameter, "epsilon, eta, rho or theta")
      ->required()
      ->check(CLI::IsMember({"epsilon", "eta", "rho", "theta"}));
  sw->add_option("--values", values, "grid values")->required();
  sw->add_option("--predictor", predictor_path, "trained predictor file");

  auto* rep = app.add_subcommand("report", "recompute run metrics from cycles.csv");
  add_common(rep, c);

  CLI11_PARSE(app, argc, argv);

  try {
    bench::ExperimentConfig cfg = resolve(c);
    if (!predictor_path.empty()) cfg.predictor_path = predictor_path;
    if (!dataset_path.empty()) cfg.dataset_path = dataset_path;

    if (refs->parsed()) {
      cfg.validate();
      auto model = bench::build_model(cfg);
      const auto track = bench::run_references(*model, cfg, cfg.seeds.front());
      const auto path = out_file(cfg, "references.csv");
      dataset::write_references(track, path.string());
      std::cout << "wrote " << track.size() << " reference rows to " << path.string() << '\n';
    } else if (gen->parsed()) {
      if (runs > 0) cfg.dataset_runs = runs;
      if (c.seed) cfg.training_seed = *c.seed;
      const auto results = bench::generate_training_data(cfg);
      auto model = bench::build_model(cfg);
      const auto records = bench::merge_records(results);
      const auto path = out_file(cfg, "dataset.csv");
      dataset::write_dataset(records, model->spec().m, model->spec().n, path.string());
      dataset::ReferenceGenConfig rc = cfg.references;
      rc.cycles = cfg.dataset_cycles;
      dataset::write_manifest(out_file(cfg, "dataset_manifest.json").string(), cfg.model, rc,
                              bench::dataset_config(cfg, 0), results);
      std::cout << "wrote " << records.size() << " records to " << path.string() << '\n';
    } else if (train->parsed()) {
      cfg.predictor_path.clear();
      const auto predictor = bench::prepare_predictor(cfg);
      const auto path = out_file(cfg, "predictor.txt");
      predictor->save(path.string());
      std::cout << "predictor with " << predictor->support_vectors()
                << " support vectors written to " << path.string() << '\n';
    } else if (run->parsed()) {
      std::shared_ptr<const bsm::MarginPredictor> predictor;
      if (cfg.solver == ga::SolverKind::kProposed) predictor = bench::prepare_predictor(cfg);
      cfg.validate();
      const auto results = bench::run_all(cfg, predictor);
      bench::emit_reports(results, cfg, cfg.output_dir, predictor.get());
      print_summary(results);
    } else if (sw->parsed()) {
      std::shared_ptr<const bsm::MarginPredictor> predictor;
      if (cfg.solver == ga::SolverKind::kProposed) predictor = bench::prepare_predictor(cfg);
      const auto p = bench::parse_sweep_parameter(parameter);
      const auto points = bench::sweep(p, values, cfg, predictor);
      std::ofstream f(out_file(cfg, "sweep.csv"));
      bench::write_sweep(points, f);
      for (const auto& pt : points) {
        std::cout << parameter << " = " << pt.value << '\n';
        if (!pt.error.empty()) std::cout << "  error: " << pt.error << '\n';
        print_summary(pt.runs);
      }
    } else if (rep->parsed()) {
      const auto logged = bench::read_cycles((fs::path(cfg.output_dir) / "cycles.csv").string());
      std::vector<bench::RunResult> results;
      for (const auto& l : logged) {
        bench::RunResult r;
        r.model = l.model;
        r.solver = l.solver;
        r.seed = l.seed;
        r.cycles = l.cycles;
        r.metrics = bench::compute_metrics(r.cycles, cfg.ga.xi, cfg.ga.nu);
        results.push_back(std::move(r));
      }
      bench::write_summary(results, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
