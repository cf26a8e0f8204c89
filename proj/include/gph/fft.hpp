#pragma once

#include "gph/tensor.hpp"

namespace gph {

/// In-place DFT along one axis of a row-major tensor.
/// forward = unscaled exp(-i...) sign; inverse carries the 1/n factor,
/// so forward-then-inverse is the identity.
void fft_axis(Tensor& t, std::size_t axis, bool forward);

/// DFT over every axis.
void fft_all_axes(Tensor& t, bool forward);

}  // namespace gph
