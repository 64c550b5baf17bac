#pragma once

#include "oscil/modulus.hpp"

#include <vector>

namespace oscil {

struct MajorantOptions {
    /// Uniform grid intervals on [0, T]; the output is exact on these nodes.
    std::size_t grid_intervals = 1024;
    /// Candidate abscissas tried per ray before giving up.
    std::size_t max_candidates_per_ray = 4000;
    /// Sub-samples per grid cell when checking that a chord stays above t xi(t).
    std::size_t chord_check_density = 8;
};

struct MajorantResult {
    /// xi~ sampled on the uniform grid merged with the chord vertices.
    Modulus majorant;
    /// Vertices (t_n, t_n xi~(t_n)) of the convex polygon t xi~(t), from t0
    /// towards the origin.
    std::vector<double> vertex_abscissas;
    std::vector<double> vertex_slopes;
    double right_slope;
};

/// Builds xi~ >= xi with xi~(t0) <= xi(t0) + delta and t xi~(t) convex.
///
/// G(t) = t xi(t) is replaced by a convex polygon: affine with slope k0 to
/// the right of t0, and to the left a chain of chords P_n P_{n-1} with P_n on
/// the ray of slope xi(t0) / 2^n, each chord lying above G and steeper than
/// the next. The chain stops once t_n drops below the grid step and closes
/// with the segment to the origin.
MajorantResult lemma_fn_majorant(const Modulus& xi, double t0, double delta,
                                 const MajorantOptions& options = {});

}  // namespace oscil
