#include "bsmpc/plant/sfjr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsmpc/plant/integrator.hpp"

namespace bsmpc::plant {

namespace {

double get(const std::map<std::string, double>& values, const char* key, double fallback) {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

}  // namespace

SfjrParams SfjrParams::from_map(const std::map<std::string, double>& v) {
  SfjrParams p;
  p.J1 = get(v, "J1", p.J1);
  p.J2 = get(v, "J2", p.J2);
  p.Kf1 = get(v, "Kf1", p.Kf1);
  p.Kf2 = get(v, "Kf2", p.Kf2);
  p.K = get(v, "K", p.K);
  p.Ktau = get(v, "Ktau", p.Ktau);
  p.Rm = get(v, "Rm", p.Rm);
  p.L = get(v, "L", p.L);
  p.Ke = get(v, "Ke", p.Ke);
  p.N = get(v, "N", p.N);
  p.m = get(v, "m", p.m);
  p.l = get(v, "l", p.l);
  p.g = get(v, "g", p.g);
  return p;
}

std::map<std::string, double> SfjrParams::to_map() const {
  return {{"J1", J1}, {"J2", J2}, {"Kf1", Kf1}, {"Kf2", Kf2}, {"K", K},
          {"Ktau", Ktau}, {"Rm", Rm}, {"L", L}, {"Ke", Ke}, {"N", N},
          {"m", m}, {"l", l}, {"g", g}};
}

StateVector sfjr_derivatives(const StateVector& x, const InputVector& u, const SfjrParams& p) {
  if (x.size() != 5) throw DimensionError("sfjr: state must have 5 entries");
  if (u.size() != 1) throw DimensionError("sfjr: input must be the motor voltage");
  const double link = x[0], link_rate = x[1], motor = x[2], motor_rate = x[3], current = x[4];
  const double spring = p.K * (motor - link);
  StateVector d(5);
  d[0] = link_rate;
  d[1] = (spring - p.m * p.g * p.l * std::sin(link) - p.Kf1 * link_rate) / p.J1;
  d[2] = motor_rate;
  d[3] = (p.N * p.Ktau * current - p.Kf2 * motor_rate - spring) / p.J2;
  d[4] = (u[0] - p.Rm * current - p.N * p.Ke * motor_rate) / p.L;
  return d;
}

ModelSpec SfjrModel::default_spec() {
  constexpr double pi = std::numbers::pi;
  ModelSpec s;
  s.name = "sfjr";
  s.m = 5;
  s.n = 1;
  s.ts = 0.04;
  s.h = 10;
  s.x_min = make_state({-pi, -pi / 18, -pi, -pi / 18, 0.0});
  s.x_max = make_state({pi, pi / 18, pi, pi / 18, 5.0});
  s.u_min = make_input({0.0});
  s.u_max = make_input({24.0});
  s.du_min = make_input({-0.1});
  s.du_max = make_input({0.1});
  s.q = make_state({1, 0, 0, 0, 0});
  s.q_terminal = StateVector::Zero(5);
  s.r = make_input({0.5});
  s.fallback_range = s.x_max - s.x_min;
  s.params = SfjrParams{}.to_map();
  s.substeps = 4;
  return s;
}

SfjrModel::SfjrModel() : SfjrModel(default_spec()) {}

SfjrModel::SfjrModel(ModelSpec spec) : Model(std::move(spec)) { on_params_changed(); }

void SfjrModel::on_params_changed() { params_ = SfjrParams::from_map(spec_.params); }

StateVector SfjrModel::derivatives(const StateVector& x, const InputVector& u) const {
  return sfjr_derivatives(x, u, params_);
}

double SfjrModel::quasi_steady_current(double voltage, double motor_rate) const {
  return (voltage - params_.N * params_.Ke * motor_rate) / params_.Rm;
}

StateVector SfjrModel::reduced_derivatives(const StateVector& x, const InputVector& u) const {
  StateVector held = x;
  held[4] = quasi_steady_current(u[0], x[3]);
  StateVector d = sfjr_derivatives(held, u, params_);
  d[4] = 0.0;
  return d;
}

StateVector SfjrModel::advance(const StateVector& x, const InputVector& u) const {
  auto rhs = [this](const StateVector& s, const InputVector& in) {
    return reduced_derivatives(s, in);
  };
  StateVector next = rk4_integrate(rhs, x, u, spec_.ts, spec_.substeps);
  next[4] = quasi_steady_current(u[0], next[3]);
  return next;
}

InputVector SfjrModel::trim_input(const StateVector& reference) const {
  const auto& p = params_;
  const double torque = p.m * p.g * p.l * std::sin(reference[0]);
  const double voltage = p.Rm * torque / (p.N * p.Ktau);
  InputVector u(1);
  u[0] = std::clamp(voltage, spec_.u_min[0], spec_.u_max[0]);
  return u;
}

void SfjrModel::complete_reference(std::vector<StateVector>& states) const {
  // Shaped state: the link angle. The rest is the static deflection path.
  const auto& p = params_;
  const std::size_t count = states.size();
  for (auto& s : states) {
    const double torque = p.m * p.g * p.l * std::sin(s[0]);
    s[2] = s[0] + torque / p.K;
    s[4] = torque / (p.N * p.Ktau);
  }
  if (count < 2) return;
  const double ts = spec_.ts;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == count ? k : k + 1;
    const double span = static_cast<double>(hi - lo) * ts;
    states[k][1] = (states[hi][0] - states[lo][0]) / span;
    states[k][3] = (states[hi][2] - states[lo][2]) / span;
  }
}

}  // namespace bsmpc::plant
