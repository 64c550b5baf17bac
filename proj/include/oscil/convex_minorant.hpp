#pragma once

#include "oscil/modulus.hpp"

namespace oscil {

/// Largest g <= f on the grid such that s -> s^2 g(s)^2 is convex.
///
/// With F(s) = s^2 f(s)^2 the condition reads s^2 g^2 <= F with s^2 g^2
/// convex, so s^2 g^2 is the lower convex envelope of the points (s, F(s)).
/// The envelope comes from a monotone-chain lower hull; g(0) = 0.
/// The grid must start at 0 and the samples must be non-negative.
SampledFunction parabolic_convex_minorant(const SampledFunction& f);

/// Lower convex envelope of (grid[i], values[i]) evaluated on the grid.
std::vector<double> lower_convex_envelope(std::span<const double> grid, std::span<const double> values);

}  // namespace oscil
