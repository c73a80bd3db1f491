#include "bsmpc/plant/model.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "bsmpc/plant/integrator.hpp"
#include "bsmpc/plant/sfjr.hpp"
#include "bsmpc/plant/uav.hpp"
#include "bsmpc/plant/vehicle.hpp"

namespace bsmpc::plant {

namespace {

bool all_finite(const auto& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace

void ModelSpec::validate() const {
  if (m <= 0 || m > kMaxStates) throw ConfigError(name + ": state count out of range");
  if (n <= 0 || n > kMaxInputs) throw ConfigError(name + ": input count out of range");
  if (!(ts > 0.0)) throw ConfigError(name + ": sampling time must be positive");
  if (h < 1) throw ConfigError(name + ": horizon must be at least 1");
  if (substeps < 1) throw ConfigError(name + ": substeps must be at least 1");
  auto dims = [&](auto& v, int expected, const char* what) {
    if (v.size() != expected) {
      throw DimensionError(name + ": " + what + " has " + std::to_string(v.size()) +
                           " entries, expected " + std::to_string(expected));
    }
  };
  dims(x_min, m, "x_min");
  dims(x_max, m, "x_max");
  dims(q, m, "Q");
  dims(q_terminal, m, "Qbar");
  dims(fallback_range, m, "fallback_range");
  dims(u_min, n, "u_min");
  dims(u_max, n, "u_max");
  dims(du_min, n, "du_min");
  dims(du_max, n, "du_max");
  dims(r, n, "R");
  for (int j = 0; j < m; ++j) {
    if (!(x_min[j] <= x_max[j])) throw ConfigError(name + ": x_min > x_max at " + std::to_string(j));
    if (q[j] < 0 || q_terminal[j] < 0) throw ConfigError(name + ": negative state weight");
  }
  for (int i = 0; i < n; ++i) {
    if (!(u_min[i] <= u_max[i])) throw ConfigError(name + ": u_min > u_max at " + std::to_string(i));
    if (!(du_min[i] <= du_max[i])) throw ConfigError(name + ": du_min > du_max");
    if (!std::isfinite(u_min[i]) || !std::isfinite(u_max[i])) {
      throw ConfigError(name + ": input bounds must be finite");
    }
    if (r[i] < 0) throw ConfigError(name + ": negative input weight");
  }
}

double ModelSpec::param(std::string_view key) const {
  auto it = params.find(std::string(key));
  if (it == params.end()) throw ConfigError(name + ": missing parameter " + std::string(key));
  return it->second;
}

StateVector ModelSpec::state_range() const {
  StateVector range(m);
  for (int j = 0; j < m; ++j) {
    const double width = x_max[j] - x_min[j];
    range[j] = std::isfinite(width) ? width : fallback_range[j];
  }
  return range;
}

void ModelSpec::check_state(const StateVector& x, std::string_view what) const {
  if (x.size() != m) {
    throw DimensionError(name + ": " + std::string(what) + " has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(m));
  }
  if (!all_finite(x)) throw Error(name + ": non-finite " + std::string(what));
}

void ModelSpec::check_input(const InputVector& u, std::string_view what) const {
  if (u.size() != n) {
    throw DimensionError(name + ": " + std::string(what) + " has " + std::to_string(u.size()) +
                         " entries, expected " + std::to_string(n));
  }
  if (!all_finite(u)) throw Error(name + ": non-finite " + std::string(what));
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

StateVector Model::step(const StateVector& x, const InputVector& u) const {
  spec_.check_state(x);
  spec_.check_input(u);
  StateVector next = advance(x, u);
  for (int j = 0; j < spec_.m; ++j) {
    if (!std::isfinite(next[j]) || std::abs(next[j]) > spec_.blowup_bound) {
      throw DivergenceError(spec_.name + ": state " + std::to_string(j) +
                            " left the blow-up bound");
    }
  }
  return next;
}

StateVector Model::advance(const StateVector& x, const InputVector& u) const {
  auto rhs = [this](const StateVector& s, const InputVector& in) { return derivatives(s, in); };
  return rk4_integrate(rhs, x, u, spec_.ts, spec_.substeps);
}

void Model::complete_reference(std::vector<StateVector>& /*states*/) const {}

void Model::set_params(const std::map<std::string, double>& overrides) {
  for (const auto& [key, value] : overrides) {
    auto it = spec_.params.find(key);
    if (it == spec_.params.end()) {
      throw ConfigError(spec_.name + ": unknown parameter '" + key + "'");
    }
    it->second = value;
  }
  on_params_changed();
}

std::unique_ptr<Model> make_model(std::string_view tag) {
  if (tag == "uav") return std::make_unique<UavModel>();
  if (tag == "vehicle") return std::make_unique<VehicleModel>();
  if (tag == "sfjr") return std::make_unique<SfjrModel>();
  throw ConfigError("unknown model '" + std::string(tag) + "' (expected uav|vehicle|sfjr)");
}

StateVector make_state(std::initializer_list<double> values) {
  StateVector x(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

InputVector make_input(std::initializer_list<double> values) {
  InputVector u(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) u[i++] = v;
  return u;
}

std::map<std::string, double> load_param_overrides(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": expected an object of name -> value");
  std::map<std::string, double> out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) throw ConfigError(path + ": parameter '" + key + "' is not a number");
    out[key] = value.get<double>();
  }
  return out;
}

}  // namespace bsmpc::plant
