#pragma once

#include <limits>

#include "bsmpc/plant/model.hpp"

namespace bsmpc::testing {

/// x_{k+1} = x_k + u_k in every coordinate (m == n).
class Integrator final : public plant::Model {
 public:
  static plant::ModelSpec make_spec(int dims, int h, double u_lim = 1.0, double du_lim = 1e9) {
    plant::ModelSpec s;
    s.name = "toy";
    s.m = dims;
    s.n = dims;
    s.ts = 0.01;
    s.h = h;
    const double inf = std::numeric_limits<double>::infinity();
    s.x_min = StateVector::Constant(dims, -inf);
    s.x_max = StateVector::Constant(dims, inf);
    s.u_min = InputVector::Constant(dims, -u_lim);
    s.u_max = InputVector::Constant(dims, u_lim);
    s.du_min = InputVector::Constant(dims, -du_lim);
    s.du_max = InputVector::Constant(dims, du_lim);
    s.q = StateVector::Ones(dims);
    s.q_terminal = StateVector::Zero(dims);
    s.r = InputVector::Zero(dims);
    s.fallback_range = StateVector::Constant(dims, 10.0);
    return s;
  }

  explicit Integrator(plant::ModelSpec spec) : Model(std::move(spec)) {}

  StateVector derivatives(const StateVector& x, const InputVector& u) const override {
    StateVector d(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) d[j] = u[j] / spec_.ts;
    return d;
  }
  InputVector trim_input(const StateVector&) const override {
    return InputVector::Zero(spec_.n);
  }

 protected:
  StateVector advance(const StateVector& x, const InputVector& u) const override {
    StateVector y = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) y[j] += u[j];
    return y;
  }
};

}  // namespace bsmpc::testing
