#pragma once

#include <vector>

#include "bsmpc/common.hpp"

namespace bsmpc::nmpc {

/// Reference states r_k and reference inputs v_k, one entry per sampling instant.
struct ReferenceTrack {
  std::vector<StateVector> states;
  std::vector<InputVector> inputs;

  std::size_t size() const noexcept { return states.size(); }
  const StateVector& state(std::size_t k) const;
  const InputVector& input(std::size_t k) const;

  /// Entries [first, first + count), used as the per-cycle message to the controller.
  ReferenceTrack window(std::size_t first, std::size_t count) const;
};

}  // namespace bsmpc::nmpc
