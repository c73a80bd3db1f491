#include "bsmpc/nmpc/horizon.hpp"

#include "bsmpc/nmpc/reference.hpp"

namespace bsmpc::nmpc {

InputVector HorizonSolution::input(int step, int n) const {
  const auto offset = static_cast<std::size_t>(step * n);
  if (offset + static_cast<std::size_t>(n) > genes.size()) {
    throw DimensionError("horizon step " + std::to_string(step) + " out of range");
  }
  InputVector u(n);
  for (int i = 0; i < n; ++i) u[i] = genes[offset + static_cast<std::size_t>(i)];
  return u;
}

void HorizonSolution::set_input(int step, const InputVector& u) {
  const auto n = static_cast<std::size_t>(u.size());
  const auto offset = static_cast<std::size_t>(step) * n;
  if (offset + n > genes.size()) {
    throw DimensionError("horizon step " + std::to_string(step) + " out of range");
  }
  for (std::size_t i = 0; i < n; ++i) genes[offset + i] = u[static_cast<Eigen::Index>(i)];
  invalidate();
}

HorizonSolution time_shift(const HorizonSolution& z, int n) {
  const auto width = static_cast<std::size_t>(n);
  if (z.genes.size() < width || z.genes.size() % width != 0) {
    throw DimensionError("time_shift: gene count is not a multiple of the input count");
  }
  HorizonSolution out;
  out.genes.reserve(z.genes.size());
  out.genes.insert(out.genes.end(), z.genes.begin() + static_cast<std::ptrdiff_t>(width),
                   z.genes.end());
  out.genes.insert(out.genes.end(), z.genes.end() - static_cast<std::ptrdiff_t>(width),
                   z.genes.end());
  return out;
}

HorizonSolution constant_solution(const InputVector& u, int h) {
  HorizonSolution z(h, static_cast<int>(u.size()));
  for (int k = 0; k < h; ++k) z.set_input(k, u);
  return z;
}

const StateVector& ReferenceTrack::state(std::size_t k) const {
  if (k >= states.size()) {
    throw DimensionError("reference state index " + std::to_string(k) + " beyond track length " +
                         std::to_string(states.size()));
  }
  return states[k];
}

const InputVector& ReferenceTrack::input(std::size_t k) const {
  if (k >= inputs.size()) {
    throw DimensionError("reference input index " + std::to_string(k) + " beyond track length " +
                         std::to_string(inputs.size()));
  }
  return inputs[k];
}

ReferenceTrack ReferenceTrack::window(std::size_t first, std::size_t count) const {
  if (first + count > states.size() || first + count > inputs.size()) {
    throw DimensionError("reference window [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") exceeds track length " +
                         std::to_string(states.size()));
  }
  ReferenceTrack out;
  out.states.assign(states.begin() + static_cast<std::ptrdiff_t>(first),
                    states.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.inputs.assign(inputs.begin() + static_cast<std::ptrdiff_t>(first),
                    inputs.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

}  // namespace bsmpc::nmpc
