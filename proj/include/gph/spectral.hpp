#pragma once

#include "gph/grid.hpp"
#include "gph/tensor.hpp"

#include <vector>

namespace gph {

/// Fields on Grid^m are tensors of rank m*d with every axis of length grid.n;
/// slot s (a particle coordinate, or one side of a kernel pair) owns axes
/// [s*d, (s+1)*d). Returns m, throwing on any shape mismatch.
std::size_t slot_count(const Tensor& f, const Grid& g);

/// Spectral Laplacian summed over the selected slots (all slots if empty).
Tensor laplacian_apply(const Tensor& f, const Grid& g,
                       const std::vector<std::size_t>& slots = {});

/// exp(-i t sum_s signs[s] |xi_s|^2) applied mode-wise; signs[s] in {-1,0,+1},
/// one entry per slot. Primed kernel axes take -1, matching the free evolution
/// operator on density kernels. Unitary on the grid.
Tensor free_propagate(const Tensor& f, const Grid& g, double t,
                      const std::vector<int>& signs);

/// Convenience: all slots with sign +1 (plain one-sided evolution).
Tensor free_propagate(const Tensor& f, const Grid& g, double t);

/// Multiplies mode-wise by prod_{s in slots} (1+|xi_s|^2)^(alpha/2).
Tensor sobolev_weight(const Tensor& f, const Grid& g, double alpha,
                      const std::vector<std::size_t>& slots = {});

}  // namespace gph
