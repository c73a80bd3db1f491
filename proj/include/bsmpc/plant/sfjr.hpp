#pragma once

#include <map>
#include <string>

#include "bsmpc/plant/model.hpp"

namespace bsmpc::plant {

// Single-link flexible-joint robot driven by a geared DC motor.
struct SfjrParams {
  double J1 = 0.8;
  double J2 = 0.1;
  double Kf1 = 2.0;
  double Kf2 = 2.0;
  double K = 70.0;
  double Ktau = 9.3e-3;
  double Rm = 5.3;
  double L = 1.4e-5;
  double Ke = 0.1;
  double N = 200.0;
  double m = 0.3;
  double l = 0.5;
  double g = 9.8;

  static SfjrParams from_map(const std::map<std::string, double>& values);
  std::map<std::string, double> to_map() const;
};

/// Full 5-state derivative of [ε₁, ε̇₁, ε₂, ε̇₂, i] for motor voltage U_v.
StateVector sfjr_derivatives(const StateVector& x, const InputVector& u, const SfjrParams& p);

/// The armature current settles in L/R_m (microseconds), far below any usable
/// step size, so `step` integrates the mechanical states with the current at
/// its quasi-steady value and writes that value back into the state.
class SfjrModel final : public Model {
 public:
  SfjrModel();
  explicit SfjrModel(ModelSpec spec);

  StateVector derivatives(const StateVector& x, const InputVector& u) const override;
  InputVector trim_input(const StateVector& reference) const override;
  void complete_reference(std::vector<StateVector>& states) const override;

  const SfjrParams& params() const noexcept { return params_; }
  static ModelSpec default_spec();

  double quasi_steady_current(double voltage, double motor_rate) const;

 protected:
  StateVector advance(const StateVector& x, const InputVector& u) const override;
  void on_params_changed() override;

 private:
  StateVector reduced_derivatives(const StateVector& x, const InputVector& u) const;

  SfjrParams params_;
};

}  // namespace bsmpc::plant
