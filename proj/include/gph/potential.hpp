#pragma once

#include "gph/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gph {

enum class PotentialShape { gaussian, bump };

/// (p+1)-body interaction profile V^(p): R^(pd) -> [0, inf).
/// gaussian: height * exp(-|y|^2 / (2 width^2));
/// bump:     height * exp(1 - 1/(1 - |y/width|^2)) for |y| < width, else 0.
/// b0 is the L1 integral over the pd-dimensional box, computed by grid
/// quadrature at construction.
struct PotentialSpec {
  int p = 1;
  PotentialShape shape = PotentialShape::gaussian;
  double width = 1.0;
  double height = 1.0;
  double b0 = 0.0;
};

double potential_value(const PotentialSpec& spec, int d, std::span<const double> y);

PotentialSpec make_potential(const Grid& g, int p, PotentialShape shape,
                             double width, double height);

/// Particle number and scaling exponent of the rescaled potential
/// V_N^(p)(y) = N^(p d beta) V^(p)(N^beta y).
struct ScalingParams {
  std::size_t N = 2;
  double beta = 0.0;
};

/// Admissible range 0 < beta < 1/(2 d p0 + 2) plus the resolution guard
/// N^beta * dx <= 1. `diagnostic` additionally admits beta = 0 and skips the
/// guard (used by the unscaled-potential identity check only).
void validate_scaling(const ScalingParams& s, int p0, const Grid& g,
                      bool diagnostic = false);

/// Diagonal multiplication potential N^(p d beta) V^(p)(N^beta (x_i1 - x_i2), ...)
/// for one strictly increasing tuple of 1-based particle indices of length p+1,
/// as a real field over Grid^N. Differences use the minimum-image convention.
std::vector<double> scaled_potential_field(const PotentialSpec& spec,
                                           const ScalingParams& s, const Grid& g,
                                           const std::vector<std::size_t>& tuple,
                                           std::size_t N);

/// Full interaction diagonal of the Hamiltonian:
/// sum_p N^-p sum_{i1<...<i_{p+1}} V_N^(p)(...). Tuples needing more than N
/// particles contribute nothing.
std::vector<double> total_potential(const std::vector<PotentialSpec>& specs,
                                    const ScalingParams& s, const Grid& g,
                                    std::size_t N);

/// V_N^(p) evaluated on p difference variables (used by the BBGKY assembly).
double scaled_potential_value(const PotentialSpec& spec, const ScalingParams& s,
                              int d, std::span<const double> diffs);

/// Advances a strictly increasing tuple over {1..N} to its successor in
/// lexicographic order; returns false (tuple reset to the first one) at the end.
bool next_combination(std::vector<std::size_t>& tuple, std::size_t N);

}  // namespace gph
