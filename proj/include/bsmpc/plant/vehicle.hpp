#pragma once

#include <map>
#include <string>

#include "bsmpc/plant/model.hpp"

namespace bsmpc::plant {

struct VehicleParams {
  double m = 1650.0;
  double Iz = 2650.0;
  double lf = 1.1;
  double lr = 1.7;
  double Cf = 55494.0;
  double Cr = 55494.0;
  double min_speed = 0.5;  ///< slip angles are undefined as ẋ → 0

  static VehicleParams from_map(const std::map<std::string, double>& values);
  std::map<std::string, double> to_map() const;
};

/// Dynamic bicycle model with a linear tire. State [X, Y, ẋ, ẏ, ψ̇, ψ], input [a, δ].
StateVector vehicle_derivatives(const StateVector& x, const InputVector& u,
                                const VehicleParams& p);

class VehicleModel final : public Model {
 public:
  VehicleModel();
  explicit VehicleModel(ModelSpec spec);

  StateVector derivatives(const StateVector& x, const InputVector& u) const override;
  InputVector trim_input(const StateVector& reference) const override;
  void complete_reference(std::vector<StateVector>& states) const override;

  const VehicleParams& params() const noexcept { return params_; }
  static ModelSpec default_spec();

 protected:
  void on_params_changed() override;

 private:
  VehicleParams params_;
};

}  // namespace bsmpc::plant
