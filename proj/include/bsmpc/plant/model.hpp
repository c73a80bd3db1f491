#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bsmpc/common.hpp"

namespace bsmpc::plant {

/// Dimensions, bounds, weights and physical parameters of one plant.
struct ModelSpec {
  std::string name;
  int m = 0;  ///< state count
  int n = 0;  ///< input count
  double ts = 0.0;
  int h = 1;
  StateVector x_min, x_max;
  InputVector u_min, u_max;
  InputVector du_min, du_max;  ///< per-step input rate bounds
  StateVector q, q_terminal;
  InputVector r;
  /// Range used in place of x_max - x_min for states with infinite bounds.
  StateVector fallback_range;
  std::map<std::string, double> params;
  int substeps = 1;
  double blowup_bound = 1e6;

  void validate() const;
  double param(std::string_view key) const;
  /// u_max - u_min per input.
  InputVector physical_margin() const { return u_max - u_min; }
  /// x_max - x_min, or the fallback range where a bound is infinite.
  StateVector state_range() const;
  void check_state(const StateVector& x, std::string_view what = "state") const;
  void check_input(const InputVector& u, std::string_view what = "input") const;
};

/// A continuous-time plant with a discrete map realized by RK4.
class Model {
 public:
  explicit Model(ModelSpec spec);
  virtual ~Model() = default;

  const ModelSpec& spec() const noexcept { return spec_; }

  virtual StateVector derivatives(const StateVector& x, const InputVector& u) const = 0;

  /// Advances the state by ts. Throws DivergenceError when any entry leaves
  /// the blow-up bound.
  StateVector step(const StateVector& x, const InputVector& u) const;

  /// Input that holds the plant at `reference` in steady state, clipped to bounds.
  virtual InputVector trim_input(const StateVector& reference) const = 0;

  /// Fills states that follow from the shaped ones (velocities from positions
  /// and similar). `states` is sampled every ts.
  virtual void complete_reference(std::vector<StateVector>& states) const;

  /// Overrides spec parameters; unknown keys are rejected.
  void set_params(const std::map<std::string, double>& overrides);

 protected:
  virtual StateVector advance(const StateVector& x, const InputVector& u) const;
  virtual void on_params_changed() {}

  ModelSpec spec_;
};

/// Discrete-time map x_{k+1} = f(x_k, u_k).
inline StateVector step(const Model& model, const StateVector& x, const InputVector& u) {
  return model.step(x, u);
}

std::unique_ptr<Model> make_model(std::string_view tag);

/// Reads a JSON object mapping parameter names to reals.
std::map<std::string, double> load_param_overrides(const std::string& path);

StateVector make_state(std::initializer_list<double> values);
InputVector make_input(std::initializer_list<double> values);

}  // namespace bsmpc::plant
