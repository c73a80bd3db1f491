#pragma once

#include <map>
#include <string>

#include "bsmpc/plant/model.hpp"

namespace bsmpc::plant {

struct UavParams {
  double m = 0.468;
  double g = 9.81;
  double l = 0.225;
  double k = 2.980e-6;
  double b = 1.140e-7;
  double I_M = 3.357e-5;
  double Ixx = 4.856e-3;
  double Iyy = 4.856e-3;
  double Izz = 8.801e-3;
  double Ax = 0.25;
  double Ay = 0.25;
  double Az = 0.25;
  /// Rotor speed in rad/s per model input unit (inputs are in kRPM).
  double rotor_speed_per_input = 1000.0 * 2.0 * 3.14159265358979323846 / 60.0;

  static UavParams from_map(const std::map<std::string, double>& values);
  std::map<std::string, double> to_map() const;
};

/// Rotor speed (rad/s) at which total thrust balances gravity.
double uav_hover_rotor_speed(const UavParams& p);

/// Time derivative of [X,Y,Z, Ẋ,Ẏ,Ż, φ,ϑ,ψ, φ̇,ϑ̇,ψ̇] for rotor speeds in rad/s.
/// Throws on negative rotor speeds or at the Euler-angle singularity.
StateVector uav_derivatives(const StateVector& x, const InputVector& rotor_speeds,
                            const UavParams& p);

class UavModel final : public Model {
 public:
  UavModel();
  explicit UavModel(ModelSpec spec);

  StateVector derivatives(const StateVector& x, const InputVector& u) const override;
  InputVector trim_input(const StateVector& reference) const override;
  void complete_reference(std::vector<StateVector>& states) const override;

  const UavParams& params() const noexcept { return params_; }
  static ModelSpec default_spec();

 protected:
  void on_params_changed() override;

 private:
  UavParams params_;
};

}  // namespace bsmpc::plant
