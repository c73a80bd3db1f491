#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsmpc/bench/config.hpp"
#include "bsmpc/bench/loop.hpp"
#include "bsmpc/bench/metrics.hpp"
#include "bsmpc/bench/pipeline.hpp"
#include "bsmpc/bench/report.hpp"

using namespace bsmpc;
using namespace bsmpc::bench;
using doctest::Approx;

namespace {

CycleLog entry(double cost, bool converged, int pop = 20, std::size_t evals = 100) {
  CycleLog c;
  c.cost = cost;
  c.converged = converged;
  c.population = pop;
  c.evaluations = evals;
  c.time = 1e-3 * static_cast<double>(evals);
  return c;
}

ExperimentConfig quick(std::string_view model = "sfjr", int cycles = 15) {
  ExperimentConfig cfg = defaults_for(model);
  cfg.solver = ga::SolverKind::kOG;
  cfg.cycles = cycles;
  cfg.seeds = {3, 4};
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("bsmpc_test_bench_" + name);
  std::filesystem::remove_all(p);
  return p;
}

class ThrowingSolver final : public ga::CycleSolver {
 public:
  ga::SolverKind kind() const override { return ga::SolverKind::kOG; }
  ga::CycleOutcome solve(const nmpc::CycleProblem&, const ga::WarmStart&, const ga::CycleContext&,
                         ga::Clock&, Rng&) override {
    throw Error("solver exploded");
  }
};

}  // namespace

TEST_CASE("compute_metrics examples") {
  std::vector<CycleLog> a{entry(1, false), entry(2, false), entry(3, false)};
  CHECK(compute_metrics(a, 20, 200).avg_cost == Approx(2.0));
  std::vector<CycleLog> b{entry(0, true), entry(0, false), entry(0, true), entry(0, false)};
  const auto m = compute_metrics(b, 20, 200);
  CHECK(m.convergence_rate == Approx(0.5));
  CHECK(m.convergence_rate >= 0.0);
  CHECK(m.convergence_rate <= 1.0);
}

TEST_CASE("metrics of concatenated logs are weighted means") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<CycleLog> x, y;
  for (int i = 0; i < 7; ++i) x.push_back(entry(u(rng), u(rng) < 5, 20 + i * 10, 50 + i));
  for (int i = 0; i < 13; ++i) y.push_back(entry(u(rng), u(rng) < 3, 200 - i * 5, 300 - i));
  auto xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  const auto mx = compute_metrics(x, 20, 200);
  const auto my = compute_metrics(y, 20, 200);
  const auto mxy = compute_metrics(xy, 20, 200);
  CHECK(mxy.avg_cost == Approx((7 * mx.avg_cost + 13 * my.avg_cost) / 20));
  CHECK(mxy.convergence_rate == Approx((7 * mx.convergence_rate + 13 * my.convergence_rate) / 20));
  CHECK(mxy.avg_time == Approx((7 * mx.avg_time + 13 * my.avg_time) / 20));
  CHECK(mxy.total_evaluations == mx.total_evaluations + my.total_evaluations);
  for (std::size_t b = 0; b < 10; ++b) {
    CHECK(mxy.pc_histogram.counts[b] == mx.pc_histogram.counts[b] + my.pc_histogram.counts[b]);
  }
}

TEST_CASE("p_c histogram spans xi to nu and holds every cycle") {
  std::vector<CycleLog> log;
  for (int p : {20, 20, 21, 110, 199, 200, 200}) log.push_back(entry(1, true, p));
  const auto m = compute_metrics(log, 20, 200);
  const auto& h = m.pc_histogram;
  REQUIRE(h.counts.size() == 10);
  CHECK(h.edges.front() == 20.0);
  CHECK(h.edges.back() == 200.0);
  CHECK(h.total() == log.size());
  CHECK(h.counts.front() == 3);
  CHECK(h.counts.back() == 3);
  CHECK(h.occupied() == 3);
  CHECK(m.min_population == 20);
  CHECK(m.max_population == 200);
}

TEST_CASE("median") {
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK_THROWS_AS(median({}), ConfigError);
}

TEST_CASE("defaults per model") {
  const auto u = defaults_for("uav");
  CHECK(u.ga.nu == 100);
  CHECK(u.ga.xi == 10);
  CHECK(u.cycles == 5000);
  CHECK(u.svr_C.size() == 4);
  const auto v = defaults_for("vehicle");
  CHECK(v.ga.epsilon == 2.0);
  CHECK(v.eta == 0.65);
  const auto s = defaults_for("sfjr");
  CHECK(s.cycles == 4000);
  CHECK(s.noise.rho == 0.2);
  CHECK(s.ga.generations == 4);
  CHECK_THROWS_AS(defaults_for("boat"), ConfigError);
  for (auto m : {"uav", "vehicle", "sfjr"}) CHECK_NOTHROW(defaults_for(m).validate());
}

TEST_CASE("config JSON round trip and validation") {
  ExperimentConfig c = defaults_for("vehicle");
  c.seeds = {1, 2, 9};
  c.ga.epsilon = 1.25;
  c.noise.theta = 0.3;
  c.model_params = {{"m", 1500.0}};
  const std::string text = config_json(c);
  CHECK(config_json(parse_config(text)) == text);

  const auto partial = parse_config(R"({"model": "uav", "cycles": 7, "ga": {"epsilon": 0.1}})");
  CHECK(partial.cycles == 7);
  CHECK(partial.ga.epsilon == 0.1);
  CHECK(partial.ga.nu == 100);

  CHECK_THROWS_AS(parse_config(R"({"model": "uav", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ga": {"nu": "many"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  auto bad = defaults_for("sfjr");
  bad.cycles = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = defaults_for("sfjr");
  bad.predictor_path = "/nonexistent/predictor.txt";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("proposed run without predictor fails before cycle 0") {
  auto cfg = quick();
  cfg.solver = ga::SolverKind::kProposed;
  CHECK_THROWS_AS(run_closed_loop(cfg, 1), ConfigError);
}

TEST_CASE("single cycle: E equals the cycle cost") {
  auto cfg = quick("sfjr", 1);
  cfg.noise = {0.0, 0.0, 0};
  const auto res = run_closed_loop(cfg, 11);
  REQUIRE(res.cycles.size() == 1);
  CHECK(res.metrics.avg_cost == res.cycles[0].cost);

  // Same cycle solved directly.
  auto model = build_model(cfg);
  const auto refs = run_references(*model, cfg, 11);
  nmpc::CycleProblem problem;
  problem.model = model.get();
  problem.x0 = refs.state(0);
  problem.refs = refs.window(0, static_cast<std::size_t>(model->spec().h) + 1);
  problem.u_prev = refs.input(0);
  problem.terminal = nmpc::TerminalSet::unbounded(model->spec().m);
  auto solver = build_solver(cfg, model->spec(), nullptr);
  auto clock = make_clock(cfg);
  Rng rng = make_stream(11, "solver", 0);
  const auto out = solver->solve(problem, ga::WarmStart::bootstrap(problem),
                                 ga::CycleContext{0, StateVector::Zero(model->spec().m)}, *clock,
                                 rng);
  CHECK(res.metrics.avg_cost == out.best.cost);
}

TEST_CASE("infinite epsilon converges every cycle") {
  for (auto solver : {ga::SolverKind::kOG, ga::SolverKind::kDE}) {
    auto cfg = quick("sfjr", 12);
    cfg.solver = solver;
    cfg.ga.epsilon = INFINITY;
    const auto res = run_closed_loop(cfg, 2);
    CHECK(res.metrics.convergence_rate == 1.0);
    for (const auto& c : res.cycles) CHECK(c.generations == 1);
  }
}

TEST_CASE("controller never reads the true plant state") {
  for (auto model : {"uav", "vehicle", "sfjr"}) {
    auto cfg = quick(model, 6);
    const auto res = run_closed_loop(cfg, 5);
    CHECK(res.true_state_reads == 0);
  }
  auto model = plant::make_model("sfjr");
  PlantSim sim(*model, StateVector::Zero(5), plant::NoiseConfig{}, 1);
  CHECK(sim.true_state_reads() == 0);
  (void)sim.true_state();
  CHECK(sim.true_state_reads() == 1);
}

TEST_CASE("measurements carry sensor noise, the true state does not") {
  auto model = plant::make_model("sfjr");
  StateVector x0 = StateVector::Zero(5);
  x0[0] = x0[2] = 0.5;
  PlantSim noisy(*model, x0, plant::NoiseConfig{0.0, 2.0, 0}, 1);
  const StateVector y = noisy.measure();
  CHECK((y - x0).norm() > 0.0);
  CHECK(noisy.true_state() == x0);
}

TEST_CASE("solver errors are logged and the fallback is applied") {
  auto model = plant::make_model("sfjr");
  auto cfg = quick("sfjr", 3);
  const auto refs = run_references(*model, cfg, 1);
  Controller ctl(*model, std::make_unique<ThrowingSolver>(), make_clock(cfg), 1);
  const auto& spec = model->spec();
  for (std::size_t c = 0; c < 3; ++c) {
    const InputVector u = ctl.step(refs.state(c), refs.window(c, static_cast<std::size_t>(spec.h) + 1));
    CHECK(ctl.last_log().fallback);
    CHECK(ctl.last_log().error == "solver exploded");
    CHECK_UNARY(u[0] >= spec.u_min[0]);
    CHECK_UNARY(u[0] <= spec.u_max[0]);
  }
}

TEST_CASE("runs are deterministic and paired across solvers") {
  auto cfg = quick("vehicle", 8);
  const auto a = run_all(cfg);
  const auto b = run_all(cfg);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == cfg.seeds[i]);
    REQUIRE(a[i].cycles.size() == b[i].cycles.size());
    for (std::size_t k = 0; k < a[i].cycles.size(); ++k) {
      CHECK(a[i].cycles[k].cost == b[i].cycles[k].cost);
    }
  }
  // Same seed, different solver: same references and first measurement.
  auto model = build_model(cfg);
  CHECK(run_references(*model, cfg, 3).states.back() == run_references(*model, cfg, 3).states.back());
}

TEST_CASE("singleton sweep equals the plain run") {
  auto cfg = quick("sfjr", 10);
  const auto plain = run_all(cfg);
  const auto pts = sweep(SweepParameter::kEpsilon, {cfg.ga.epsilon}, cfg);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].error.empty());
  REQUIRE(pts[0].runs.size() == plain.size());
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(pts[0].runs[i].metrics.avg_cost == plain[i].metrics.avg_cost);
    CHECK(pts[0].runs[i].metrics.total_evaluations == plain[i].metrics.total_evaluations);
  }
  CHECK_THROWS_AS(sweep(SweepParameter::kEta, {}, cfg), ConfigError);
}

TEST_CASE("sweep marks failing points and keeps going") {
  auto cfg = quick("sfjr", 4);
  cfg.seeds = {1};
  const auto pts = sweep(SweepParameter::kRho, {0.1, 150.0}, cfg);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].error.empty());
  CHECK_FALSE(pts[1].error.empty());
  std::ostringstream out;
  write_sweep(pts, out);
  CHECK(out.str().find("rho,150,,") != std::string::npos);
}

TEST_CASE("sweep parameters") {
  const auto base = defaults_for("sfjr");
  CHECK(with_parameter(base, SweepParameter::kEpsilon, 0.1).ga.epsilon == 0.1);
  CHECK(with_parameter(base, SweepParameter::kEta, 0.3).eta == 0.3);
  const auto r = with_parameter(base, SweepParameter::kRho, 0.4);
  CHECK(r.noise.rho == 0.4);
  CHECK(r.training_noise.rho == base.training_noise.rho);
  CHECK(with_parameter(base, SweepParameter::kTheta, 0.3).noise.theta == 0.3);
  CHECK(parse_sweep_parameter("theta") == SweepParameter::kTheta);
  CHECK_THROWS_AS(parse_sweep_parameter("nu"), ConfigError);
}

TEST_CASE("double formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, 123456789.125, -0.0, 6.02214076e23}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
    CHECK(s.size() <= 24);
  }
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("reports: deterministic bytes, one summary row per run, histograms sum to H") {
  auto cfg = quick("sfjr", 9);
  const auto d1 = scratch("a"), d2 = scratch("b");
  emit_reports(run_all(cfg), cfg, d1.string());
  emit_reports(run_all(cfg), cfg, d2.string());
  for (auto f : {"summary.csv", "cycles.csv", "pc_histogram.csv", "manifest.json"}) {
    INFO(f);
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  std::istringstream summary(slurp(d1 / "summary.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(summary, line)) ++rows;
  CHECK(rows == static_cast<int>(cfg.seeds.size()));

  std::istringstream hist(slurp(d1 / "pc_histogram.csv"));
  std::getline(hist, line);
  std::map<std::string, long> sums;
  while (std::getline(hist, line)) {
    const auto seed = line.substr(0, line.find(',', line.find(',', line.find(',') + 1) + 1));
    sums[seed] += std::stol(line.substr(line.rfind(',') + 1));
  }
  CHECK(sums.size() == cfg.seeds.size());
  for (const auto& [_, s] : sums) CHECK(s == cfg.cycles);

  const std::string manifest = slurp(d1 / "manifest.json");
  CHECK(manifest.find("\"seeds\"") != std::string::npos);
  CHECK(manifest.find("\"epsilon\"") != std::string::npos);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("metrics recomputed from cycles.csv match the run") {
  auto cfg = quick("vehicle", 12);
  cfg.solver = ga::SolverKind::kPSO;
  const auto runs = run_all(cfg);
  std::ostringstream out;
  write_cycles(runs, out);
  std::istringstream in(out.str());
  const auto logged = read_cycles(in);
  REQUIRE(logged.size() == runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(logged[i].seed == runs[i].seed);
    const auto m = compute_metrics(logged[i].cycles, cfg.ga.xi, cfg.ga.nu);
    CHECK(m.avg_cost == runs[i].metrics.avg_cost);
    CHECK(m.convergence_rate == runs[i].metrics.convergence_rate);
    CHECK(m.avg_time == runs[i].metrics.avg_time);
    CHECK(m.total_evaluations == runs[i].metrics.total_evaluations);
    CHECK(m.pc_histogram.counts == runs[i].metrics.pc_histogram.counts);
  }
  std::istringstream bad("model,solver\n");
  CHECK_THROWS_AS(read_cycles(bad), ParseError);
}

TEST_CASE("training pipeline feeds the proposed solver") {
  auto cfg = quick("sfjr", 20);
  cfg.dataset_runs = 1;
  cfg.dataset_cycles = 40;
  cfg.ga.nu = 40;
  cfg.ga.xi = 4;
  const auto data = generate_training_data(cfg);
  REQUIRE(data.size() == 1);
  const auto records = merge_records(data);
  CHECK(records.size() + data[0].skipped + 1 == data[0].cycles);
  auto model = build_model(cfg);
  auto predictor = std::make_shared<const bsm::MarginPredictor>(
      train_predictor(records, cfg, model->spec().physical_margin()));
  CHECK(predictor->inputs() == 1);
  CHECK(predictor->calibrated());

  cfg.solver = ga::SolverKind::kProposed;
  const auto res = run_closed_loop(cfg, 7, predictor);
  CHECK(res.cycles.size() == 20);
  for (const auto& c : res.cycles) {
    CHECK(c.population >= cfg.ga.xi);
    CHECK(c.population <= cfg.ga.nu);
  }
  CHECK(res.cycles[0].margin_ratio == 1.0);
  CHECK(res.cycles[1].margin_ratio == 1.0);

  const auto path = scratch("predictor.txt");
  predictor->save(path.string());
  cfg.predictor_path = path.string();
  const auto loaded = prepare_predictor(cfg);
  const auto again = run_closed_loop(cfg, 7, loaded);
  for (std::size_t k = 0; k < res.cycles.size(); ++k) CHECK(again.cycles[k].cost == res.cycles[k].cost);
  std::filesystem::remove(path);
}
