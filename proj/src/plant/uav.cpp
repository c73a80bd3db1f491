#include "bsmpc/plant/uav.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bsmpc::plant {

namespace {

constexpr double kGimbalGuard = 1e-3;

double get(const std::map<std::string, double>& values, const char* key, double fallback) {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

}  // namespace

UavParams UavParams::from_map(const std::map<std::string, double>& v) {
  UavParams p;
  p.m = get(v, "m", p.m);
  p.g = get(v, "g", p.g);
  p.l = get(v, "l", p.l);
  p.k = get(v, "k", p.k);
  p.b = get(v, "b", p.b);
  p.I_M = get(v, "I_M", p.I_M);
  p.Ixx = get(v, "Ixx", p.Ixx);
  p.Iyy = get(v, "Iyy", p.Iyy);
  p.Izz = get(v, "Izz", p.Izz);
  p.Ax = get(v, "Ax", p.Ax);
  p.Ay = get(v, "Ay", p.Ay);
  p.Az = get(v, "Az", p.Az);
  p.rotor_speed_per_input = get(v, "rotor_speed_per_input", p.rotor_speed_per_input);
  return p;
}

std::map<std::string, double> UavParams::to_map() const {
  return {{"m", m},     {"g", g},     {"l", l},     {"k", k},     {"b", b},
          {"I_M", I_M}, {"Ixx", Ixx}, {"Iyy", Iyy}, {"Izz", Izz}, {"Ax", Ax},
          {"Ay", Ay},   {"Az", Az},   {"rotor_speed_per_input", rotor_speed_per_input}};
}

double uav_hover_rotor_speed(const UavParams& p) { return std::sqrt(p.m * p.g / (4.0 * p.k)); }

StateVector uav_derivatives(const StateVector& x, const InputVector& w, const UavParams& p) {
  if (x.size() != 12) throw DimensionError("uav: state must have 12 entries");
  if (w.size() != 4) throw DimensionError("uav: input must have 4 rotor speeds");
  for (int i = 0; i < 4; ++i) {
    if (w[i] < 0.0) throw Error("uav: negative rotor speed on rotor " + std::to_string(i + 1));
  }
  const double phi = x[6], theta = x[7], psi = x[8];
  if (std::abs(std::cos(theta)) < std::sin(kGimbalGuard)) {
    throw SingularityError("uav: pitch at the Euler-rate singularity (gimbal lock)");
  }
  const double sphi = std::sin(phi), cphi = std::cos(phi);
  const double sth = std::sin(theta), cth = std::cos(theta), tth = sth / cth;
  const double spsi = std::sin(psi), cpsi = std::cos(psi);

  const double w1 = w[0] * w[0], w2 = w[1] * w[1], w3 = w[2] * w[2], w4 = w[3] * w[3];
  const double thrust = p.k * (w1 + w2 + w3 + w4);
  const double tau_phi = p.l * p.k * (-w2 + w4);
  const double tau_theta = p.l * p.k * (-w1 + w3);
  const double tau_psi = p.b * (w1 - w2 + w3 - w4);
  const double w_gamma = w[0] - w[1] + w[2] - w[3];

  const double dphi = x[9], dtheta = x[10], dpsi = x[11];
  // Body rates r = T·ė.
  const double pr = dphi - sth * dpsi;
  const double qr = cphi * dtheta + cth * sphi * dpsi;
  const double rr = -sphi * dtheta + cth * cphi * dpsi;

  const double dp = (p.Iyy - p.Izz) * qr * rr / p.Ixx - p.I_M * qr * w_gamma / p.Ixx + tau_phi / p.Ixx;
  const double dq = (p.Izz - p.Ixx) * pr * rr / p.Iyy + p.I_M * pr * w_gamma / p.Iyy + tau_theta / p.Iyy;
  const double dr = (p.Ixx - p.Iyy) * pr * qr / p.Izz + tau_psi / p.Izz;

  // ë = T⁻¹(ṙ − Ṫ·ė).
  const double tdot0 = -cth * dtheta * dpsi;
  const double tdot1 = -sphi * dphi * dtheta + (-sth * dtheta * sphi + cth * cphi * dphi) * dpsi;
  const double tdot2 = -cphi * dphi * dtheta + (-sth * dtheta * cphi - cth * sphi * dphi) * dpsi;
  const double a0 = dp - tdot0, a1 = dq - tdot1, a2 = dr - tdot2;
  const double ddphi = a0 + sphi * tth * a1 + cphi * tth * a2;
  const double ddtheta = cphi * a1 - sphi * a2;
  const double ddpsi = (sphi * a1 + cphi * a2) / cth;

  StateVector d(12);
  d[0] = x[3];
  d[1] = x[4];
  d[2] = x[5];
  d[3] = thrust / p.m * (cpsi * sth * cphi + spsi * sphi) - p.Ax * x[3] / p.m;
  d[4] = thrust / p.m * (spsi * sth * cphi - cpsi * sphi) - p.Ay * x[4] / p.m;
  d[5] = -p.g + thrust / p.m * (cth * cphi) - p.Az * x[5] / p.m;
  d[6] = dphi;
  d[7] = dtheta;
  d[8] = dpsi;
  d[9] = ddphi;
  d[10] = ddtheta;
  d[11] = ddpsi;
  return d;
}

ModelSpec UavModel::default_spec() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double pi = std::numbers::pi;
  ModelSpec s;
  s.name = "uav";
  s.m = 12;
  s.n = 4;
  s.ts = 0.02;
  s.h = 10;
  s.x_min = make_state({-inf, -inf, -inf, -inf, -inf, -inf, -pi / 3, -pi / 3, -pi / 3, -pi / 24,
                        -pi / 24, -pi / 24});
  s.x_max = -s.x_min;
  s.u_min = make_input({0, 0, 0, 0});
  s.u_max = make_input({12, 12, 12, 12});
  s.du_min = make_input({-0.2, -0.2, -0.2, -0.2});
  s.du_max = make_input({0.2, 0.2, 0.2, 0.2});
  s.q = make_state({1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0});
  s.q_terminal = StateVector::Zero(12);
  s.r = make_input({0.1, 0.1, 0.1, 0.1});
  s.fallback_range = StateVector::Constant(12, 10.0);
  s.params = UavParams{}.to_map();
  s.substeps = 1;
  return s;
}

UavModel::UavModel() : UavModel(default_spec()) {}

UavModel::UavModel(ModelSpec spec) : Model(std::move(spec)) { on_params_changed(); }

void UavModel::on_params_changed() { params_ = UavParams::from_map(spec_.params); }

StateVector UavModel::derivatives(const StateVector& x, const InputVector& u) const {
  return uav_derivatives(x, InputVector(u * params_.rotor_speed_per_input), params_);
}

InputVector UavModel::trim_input(const StateVector& /*reference*/) const {
  const double hover = uav_hover_rotor_speed(params_) / params_.rotor_speed_per_input;
  InputVector u(4);
  for (int i = 0; i < 4; ++i) u[i] = std::clamp(hover, spec_.u_min[i], spec_.u_max[i]);
  return u;
}

void UavModel::complete_reference(std::vector<StateVector>& states) const {
  const std::size_t count = states.size();
  if (count < 2) return;
  const double ts = spec_.ts;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == count ? k : k + 1;
    const double span = static_cast<double>(hi - lo) * ts;
    for (int j = 0; j < 3; ++j) {
      states[k][3 + j] = (states[hi][j] - states[lo][j]) / span;
      states[k][9 + j] = (states[hi][6 + j] - states[lo][6 + j]) / span;
    }
  }
}

}  // namespace bsmpc::plant
