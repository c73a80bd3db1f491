#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bsmpc/common.hpp"

namespace bsmpc::nmpc {

enum class Feasibility { kUnchecked, kYes, kNo };

/// Candidate control sequence z_c = [u_c, ..., u_{c+h-1}], flattened step-major
/// (all n inputs of step 0, then step 1, ...).
struct HorizonSolution {
  std::vector<double> genes;
  double cost = std::numeric_limits<double>::quiet_NaN();
  Feasibility feasible = Feasibility::kUnchecked;

  HorizonSolution() = default;
  HorizonSolution(int h, int n) : genes(static_cast<std::size_t>(h * n), 0.0) {}
  explicit HorizonSolution(std::vector<double> g) : genes(std::move(g)) {}

  bool evaluated() const noexcept { return !std::isnan(cost); }
  int steps(int n) const noexcept { return static_cast<int>(genes.size()) / n; }

  InputVector input(int step, int n) const;
  void set_input(int step, const InputVector& u);
  void invalidate() noexcept {
    cost = std::numeric_limits<double>::quiet_NaN();
    feasible = Feasibility::kUnchecked;
  }
};

/// Per-input search-space widths handed to the sampler (predicted BSM or
/// physical margins).
struct MarginVector {
  InputVector widths;

  MarginVector() = default;
  explicit MarginVector(InputVector w) : widths(std::move(w)) {}
  int size() const noexcept { return static_cast<int>(widths.size()); }
  double operator[](int i) const { return widths[i]; }
};

/// Drops the first step and replicates the last one: the warm start for the
/// next cycle.
HorizonSolution time_shift(const HorizonSolution& z, int n);

/// Repeats `u` over `h` steps.
HorizonSolution constant_solution(const InputVector& u, int h);

}  // namespace bsmpc::nmpc
