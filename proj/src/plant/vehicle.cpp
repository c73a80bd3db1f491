#include "bsmpc/plant/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bsmpc::plant {

namespace {

double get(const std::map<std::string, double>& values, const char* key, double fallback) {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

}  // namespace

VehicleParams VehicleParams::from_map(const std::map<std::string, double>& v) {
  VehicleParams p;
  p.m = get(v, "m", p.m);
  p.Iz = get(v, "Iz", p.Iz);
  p.lf = get(v, "lf", p.lf);
  p.lr = get(v, "lr", p.lr);
  p.Cf = get(v, "Cf", p.Cf);
  p.Cr = get(v, "Cr", p.Cr);
  p.min_speed = get(v, "min_speed", p.min_speed);
  return p;
}

std::map<std::string, double> VehicleParams::to_map() const {
  return {{"m", m},   {"Iz", Iz}, {"lf", lf},
          {"lr", lr}, {"Cf", Cf}, {"Cr", Cr}, {"min_speed", min_speed}};
}

StateVector vehicle_derivatives(const StateVector& x, const InputVector& u,
                                const VehicleParams& p) {
  if (x.size() != 6) throw DimensionError("vehicle: state must have 6 entries");
  if (u.size() != 2) throw DimensionError("vehicle: input must be [a, delta]");
  const double vx = x[2], vy = x[3], yaw_rate = x[4], yaw = x[5];
  if (vx < p.min_speed) {
    throw LowSpeedError("vehicle: longitudinal speed " + std::to_string(vx) +
                        " below the slip-angle guard");
  }
  const double accel = u[0], steer = u[1];
  const double alpha_f = std::atan((vy + p.lf * yaw_rate) / vx) - steer;
  const double alpha_r = std::atan((vy - p.lr * yaw_rate) / vx);
  const double force_f = -p.Cf * alpha_f;
  const double force_r = -p.Cr * alpha_r;

  StateVector d(6);
  d[0] = vx * std::cos(yaw) - vy * std::sin(yaw);
  d[1] = vx * std::sin(yaw) + vy * std::cos(yaw);
  d[2] = yaw_rate * vy + accel;
  d[3] = -yaw_rate * vx + 2.0 / p.m * (force_f * std::cos(steer) + force_r);
  d[4] = 2.0 / p.Iz * (p.lf * force_f - p.lr * force_r);
  d[5] = yaw_rate;
  return d;
}

ModelSpec VehicleModel::default_spec() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double pi = std::numbers::pi;
  ModelSpec s;
  s.name = "vehicle";
  s.m = 6;
  s.n = 2;
  s.ts = 0.02;
  s.h = 10;
  s.x_min = make_state({-inf, -inf, 0.5, -3.0, -1.0, -2 * pi});
  s.x_max = make_state({inf, inf, 30.0, 3.0, 1.0, 2 * pi});
  s.u_min = make_input({-3.0, -0.5});
  s.u_max = make_input({3.0, 0.5});
  s.du_min = make_input({-0.2, -0.2});
  s.du_max = make_input({0.2, 0.2});
  s.q = make_state({1, 1, 0, 0, 0, 1});
  s.q_terminal = StateVector::Zero(6);
  s.r = make_input({0.1, 0.1});
  s.fallback_range = StateVector::Constant(6, 10.0);
  s.params = VehicleParams{}.to_map();
  s.substeps = 4;
  return s;
}

VehicleModel::VehicleModel() : VehicleModel(default_spec()) {}

VehicleModel::VehicleModel(ModelSpec spec) : Model(std::move(spec)) { on_params_changed(); }

void VehicleModel::on_params_changed() { params_ = VehicleParams::from_map(spec_.params); }

StateVector VehicleModel::derivatives(const StateVector& x, const InputVector& u) const {
  return vehicle_derivatives(x, u, params_);
}

InputVector VehicleModel::trim_input(const StateVector& /*reference*/) const {
  return InputVector::Zero(2);
}

void VehicleModel::complete_reference(std::vector<StateVector>& states) const {
  // Shaped states: X and Y. Heading, speeds and yaw rate follow the path.
  const std::size_t count = states.size();
  if (count < 2) return;
  const double ts = spec_.ts;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == count ? k : k + 1;
    const double span = static_cast<double>(hi - lo) * ts;
    const double dx = (states[hi][0] - states[lo][0]) / span;
    const double dy = (states[hi][1] - states[lo][1]) / span;
    states[k][2] = std::clamp(std::hypot(dx, dy), spec_.x_min[2], spec_.x_max[2]);
    states[k][3] = 0.0;
    states[k][5] = std::atan2(dy, dx);
  }
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == count ? k : k + 1;
    const double span = static_cast<double>(hi - lo) * ts;
    states[k][4] = std::clamp((states[hi][5] - states[lo][5]) / span, spec_.x_min[4],
                              spec_.x_max[4]);
  }
}

}  // namespace bsmpc::plant
