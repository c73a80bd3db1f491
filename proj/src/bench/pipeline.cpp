#include "bsmpc/bench/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "bsmpc/bsm/cv.hpp"
#include "bsmpc/dataset/io.hpp"
#include "bsmpc/dataset/references.hpp"

namespace bsmpc::bench {

dataset::DatasetConfig dataset_config(const ExperimentConfig& cfg, int run) {
  dataset::DatasetConfig d;
  d.noise = cfg.training_noise;
  d.ga = dataset::exhaustive_ga(cfg.ga);
  d.population = 4 * cfg.ga.nu;
  d.seed = cfg.training_seed + static_cast<std::uint64_t>(run);
  return d;
}

std::vector<dataset::DatasetResult> generate_training_data(const ExperimentConfig& cfg) {
  cfg.validate();
  auto model = build_model(cfg);
  std::vector<dataset::DatasetResult> out;
  for (int r = 0; r < cfg.dataset_runs; ++r) {
    const auto d = dataset_config(cfg, r);
    dataset::ReferenceGenConfig rc = cfg.references;
    rc.horizon = model->spec().h;
    rc.cycles = cfg.dataset_cycles;
    rc.seed = d.seed;
    Rng rng = make_stream(d.seed, "references");
    const auto refs = dataset::generate_references(*model, rc, rng);
    out.push_back(dataset::build_dataset(*model, refs, d));
  }
  return out;
}

std::vector<dataset::CycleRecord> merge_records(const std::vector<dataset::DatasetResult>& runs) {
  std::vector<dataset::CycleRecord> all;
  for (const auto& r : runs) all.insert(all.end(), r.records.begin(), r.records.end());
  return all;
}

bsm::MarginPredictor train_predictor(const std::vector<dataset::CycleRecord>& records,
                                     const ExperimentConfig& cfg, const InputVector& beta) {
  if (records.size() < 4) throw ConfigError("train: need at least 4 records");
  const int n = static_cast<int>(beta.size());
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_stream(cfg.training_seed, "split");
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_val = static_cast<std::size_t>(cfg.validation_fraction * records.size());
  std::vector<dataset::CycleRecord> train, val;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_val ? val : train).push_back(records[order[k]]);
  }

  bsm::RowMatrix X, Y;
  dataset::to_matrices(train, X, Y);
  if (Y.cols() != n) throw DimensionError("train: dataset and model disagree on n");
  const bool given = !cfg.svr_C.empty();
  if (given && static_cast<int>(cfg.svr_C.size()) != n) {
    throw ConfigError("train: svr settings need one entry per input");
  }
  std::vector<bsm::SvrParams> params;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd t = Y.col(i);
    const auto k = static_cast<std::size_t>(i);
    if (given) {
      params.push_back(bsm::scaled_params(cfg.svr_C[k], cfg.svr_lambda[k], cfg.svr_gamma[k], X, t));
    } else {
      params.push_back(bsm::cross_validate(X, t, bsm::default_grid(X, t), 5, cfg.training_seed).best);
    }
  }
  auto predictor = bsm::MarginPredictor::train(X, Y, params, beta);
  if (!val.empty()) {
    bsm::RowMatrix VX, VY;
    dataset::to_matrices(val, VX, VY);
    predictor.calibrate(VX);
  }
  return predictor;
}

std::shared_ptr<const bsm::MarginPredictor> prepare_predictor(const ExperimentConfig& cfg) {
  if (!cfg.predictor_path.empty()) {
    return std::make_shared<const bsm::MarginPredictor>(bsm::MarginPredictor::load(cfg.predictor_path));
  }
  auto model = build_model(cfg);
  const InputVector beta = model->spec().physical_margin();
  std::vector<dataset::CycleRecord> records;
  if (!cfg.dataset_path.empty()) {
    records = dataset::read_dataset(cfg.dataset_path).records;
  } else {
    records = merge_records(generate_training_data(cfg));
  }
  return std::make_shared<const bsm::MarginPredictor>(train_predictor(records, cfg, beta));
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "epsilon") return SweepParameter::kEpsilon;
  if (name == "eta") return SweepParameter::kEta;
  if (name == "rho") return SweepParameter::kRho;
  if (name == "theta") return SweepParameter::kTheta;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kEpsilon: return "epsilon";
    case SweepParameter::kEta: return "eta";
    case SweepParameter::kRho: return "rho";
    case SweepParameter::kTheta: return "theta";
  }
  return "unknown";
}

ExperimentConfig with_parameter(const ExperimentConfig& base, SweepParameter p, double value) {
  ExperimentConfig c = base;
  switch (p) {
    case SweepParameter::kEpsilon: c.ga.epsilon = value; break;
    case SweepParameter::kEta: c.eta = value; break;
    case SweepParameter::kRho: c.noise.rho = value; break;
    case SweepParameter::kTheta: c.noise.theta = value; break;
  }
  return c;
}

std::vector<SweepPoint> sweep(SweepParameter p, const std::vector<double>& grid,
                              const ExperimentConfig& base,
                              std::shared_ptr<const bsm::MarginPredictor> predictor) {
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  std::vector<SweepPoint> out;
  for (double v : grid) {
    SweepPoint pt;
    pt.parameter = p;
    pt.value = v;
    try {
      pt.runs = run_all(with_parameter(base, p, v), predictor);
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace bsmpc::bench
