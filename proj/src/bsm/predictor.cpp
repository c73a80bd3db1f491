#include "bsmpc/bsm/predictor.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bsmpc::bsm {

MarginPredictor::MarginPredictor(std::vector<SvrModel> models, InputVector beta)
    : models_(std::move(models)), beta_(std::move(beta)) {
  if (static_cast<Eigen::Index>(models_.size()) != beta_.size()) {
    throw DimensionError("margin predictor: one regressor per physical margin required");
  }
}

MarginPredictor MarginPredictor::train(const RowMatrix& errors, const RowMatrix& deltas,
                                       const std::vector<SvrParams>& params,
                                       const InputVector& beta) {
  const auto n = static_cast<std::size_t>(deltas.cols());
  if (params.size() != n || static_cast<std::size_t>(beta.size()) != n) {
    throw DimensionError("margin predictor: params, beta and target columns disagree");
  }
  if (errors.rows() != deltas.rows()) throw DimensionError("margin predictor: row count mismatch");
  std::vector<SvrModel> models;
  for (std::size_t i = 0; i < n; ++i) {
    models.push_back(train_svr(errors, deltas.col(static_cast<Eigen::Index>(i)), params[i]));
  }
  return MarginPredictor(std::move(models), beta);
}

MarginPrediction MarginPredictor::predict(std::span<const double> error) const {
  MarginPrediction out;
  InputVector raw(inputs());
  out.confidences.reserve(models_.size());
  for (int i = 0; i < inputs(); ++i) {
    const auto& mdl = models_[static_cast<std::size_t>(i)];
    raw[i] = mdl.predict(error, &out.kernel_evaluations);
    out.confidences.push_back(mdl.confidence(error));
  }
  out.margins = clamp_margin(MarginVector(raw), beta_);
  out.overall = overall_confidence(out.confidences);
  return out;
}

std::size_t MarginPredictor::support_vectors() const {
  std::size_t total = 0;
  for (const auto& m : models_) total += static_cast<std::size_t>(m.n_s());
  return total;
}

void MarginPredictor::calibrate(const RowMatrix& validation) {
  calibration_.clear();
  const auto cols = static_cast<std::size_t>(validation.cols());
  for (Eigen::Index r = 0; r < validation.rows(); ++r) {
    calibration_.push_back(predict(std::span(validation.row(r).data(), cols)).overall);
  }
  std::sort(calibration_.begin(), calibration_.end());
}

double MarginPredictor::threshold_for(double eta) const {
  if (calibration_.empty()) throw ConfigError("margin predictor: not calibrated");
  if (eta <= 0.0) return INFINITY;
  if (eta >= 1.0) return -INFINITY;
  // Strictly below the (1 - eta) order statistic so that ~eta of the rows pass.
  const double pos = (1.0 - eta) * static_cast<double>(calibration_.size());
  const auto k = std::min(calibration_.size() - 1, static_cast<std::size_t>(pos));
  return std::nextafter(calibration_[k], -INFINITY);
}

namespace {

std::string kernel_name(KernelKind k) { return k == KernelKind::kLinear ? "linear" : "gaussian"; }

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const std::string& expected_tag) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of file, expected '" + expected_tag + "'", line_ + 1);
    ++line_;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != expected_tag) {
      throw ParseError("expected '" + expected_tag + "', found '" + tag + "'", line_);
    }
    return ss;
  }

  template <typename T>
  T get(std::istringstream& ss, const char* what) {
    T v{};
    if (!(ss >> v)) throw ParseError(std::string("malformed ") + what, line_);
    return v;
  }

  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace

void MarginPredictor::write(std::ostream& out) const {
  out << std::setprecision(17);
  out << "bsmpc-margin-predictor " << kFormatVersion << "\n";
  out << "inputs " << inputs() << "\n";
  out << "beta";
  for (int i = 0; i < beta_.size(); ++i) out << ' ' << beta_[i];
  out << "\ncalibration " << calibration_.size();
  for (double c : calibration_) out << ' ' << c;
  out << "\n";
  for (const auto& m : models_) {
    out << "model " << kernel_name(m.kind) << ' ' << m.gamma << ' ' << m.C << ' ' << m.lambda
        << ' ' << m.bias << ' ' << m.n_s() << ' ' << m.support_vectors.cols() << "\n";
    for (int j = 0; j < m.n_s(); ++j) {
      out << "sv " << m.dual_coefs[j];
      for (Eigen::Index k = 0; k < m.support_vectors.cols(); ++k) out << ' ' << m.support_vectors(j, k);
      out << "\n";
    }
  }
  out << "end\n";
}

MarginPredictor MarginPredictor::read(std::istream& in) {
  LineReader r(in);
  auto header = r.next("bsmpc-margin-predictor");
  const int version = r.get<int>(header, "version");
  if (version != kFormatVersion) {
    throw ParseError("unsupported predictor format version " + std::to_string(version), r.line());
  }
  auto ls = r.next("inputs");
  const int n = r.get<int>(ls, "input count");
  if (n < 1 || n > kMaxInputs) throw ParseError("input count out of range", r.line());
  auto bs = r.next("beta");
  InputVector beta(n);
  for (int i = 0; i < n; ++i) beta[i] = r.get<double>(bs, "beta");
  auto cs = r.next("calibration");
  const auto nc = r.get<std::size_t>(cs, "calibration count");
  std::vector<double> calibration(nc);
  for (auto& c : calibration) c = r.get<double>(cs, "calibration value");
  std::vector<SvrModel> models;
  for (int i = 0; i < n; ++i) {
    auto ms = r.next("model");
    SvrModel m;
    const auto kind = r.get<std::string>(ms, "kernel");
    if (kind == "gaussian") {
      m.kind = KernelKind::kGaussian;
    } else if (kind == "linear") {
      m.kind = KernelKind::kLinear;
    } else {
      throw ParseError("unknown kernel '" + kind + "'", r.line());
    }
    m.gamma = r.get<double>(ms, "gamma");
    m.C = r.get<double>(ms, "C");
    m.lambda = r.get<double>(ms, "lambda");
    m.bias = r.get<double>(ms, "bias");
    const int ns = r.get<int>(ms, "support vector count");
    const int dims = r.get<int>(ms, "dimension");
    if (ns < 0 || dims < 0) throw ParseError("negative size", r.line());
    m.support_vectors.resize(ns, dims);
    m.dual_coefs.resize(ns);
    for (int j = 0; j < ns; ++j) {
      auto ss = r.next("sv");
      m.dual_coefs[j] = r.get<double>(ss, "coefficient");
      for (int k = 0; k < dims; ++k) m.support_vectors(j, k) = r.get<double>(ss, "support vector");
    }
    models.push_back(std::move(m));
  }
  r.next("end");
  MarginPredictor p(std::move(models), beta);
  p.calibration_ = std::move(calibration);
  std::sort(p.calibration_.begin(), p.calibration_.end());
  return p;
}

void MarginPredictor::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write(out);
}

MarginPredictor MarginPredictor::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return read(in);
}

}  // namespace bsmpc::bsm
