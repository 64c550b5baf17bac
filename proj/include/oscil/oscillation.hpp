#pragma once

#include "oscil/modulus.hpp"
#include "oscil/report.hpp"
#include "oscil/step_function.hpp"

#include <optional>
#include <span>
#include <vector>

namespace oscil {

/// A window together with the variance of the function over it.
struct Window {
    Interval interval;
    double variance;
};

/// Largest variance over windows of exactly the given length.
///
/// For a fixed length the window's mean and second moment are affine in its
/// left end while both ends stay inside fixed pieces, so the variance is a
/// concave quadratic on each such cell and is maximized in closed form.
Window max_variance_at_length(const StepFunction& phi, double length);

struct OscillationProfile {
    std::vector<double> lengths;
    std::vector<double> xi_values;
    std::vector<Interval> witnesses;

    /// The profile as a sampled modulus, with (0, 0) prepended.
    Modulus as_modulus() const;
};

/// xi_phi(t) = sup over windows J with |J| <= t of sqrt(var(phi, J)).
///
/// The supremum is exact. Over the region {|J| <= t} the variance is
/// maximized either on the line |J| = t (see max_variance_at_length) or with
/// one end of J on a piece boundary; in the latter case the variance as a
/// function of the free end's position is M/w + L0 (w - L0) D / w^2, which is
/// unimodal in the window length w with its peak at 2 L0^2 D / (M + L0 D).
/// Interior critical points carry the same value as a point on this boundary.
OscillationProfile oscillation_profile(const StepFunction& phi, std::span<const double> lengths);

/// Window lengths examined by the norm checks.
///
/// Step functions with jumps have variance bounded away from zero on
/// arbitrarily short windows, so their norm against a modulus vanishing at
/// the origin is infinite. The checks therefore work on a length grid:
/// every window position is covered exactly, lengths are the grid nodes plus
/// golden-section refinement between neighbouring nodes (closed-form moduli
/// only; a sampled modulus is trusted at its own nodes).
struct LengthGrid {
    std::vector<double> nodes;
    bool refine = true;

    /// nodes k * |I| / count for k = 1..count.
    static LengthGrid uniform(double domain_length, std::size_t count);
};

/// Nodes to use against xi for a function on a domain of the given length:
/// xi's own nodes for sampled moduli, a uniform grid otherwise.
LengthGrid default_length_grid(const Modulus& xi, double domain_length, std::size_t count = 256);

/// Checks var(phi, J) <= C^2 xi^2(|J|) over all windows with |J| on the
/// length grid. Margins are C^2 xi^2(|J|) - var; worst margin and witness
/// window are reported.
VerificationReport norm_bound_check(const StepFunction& phi, const Modulus& xi, double bound,
                                    const std::optional<LengthGrid>& lengths = std::nullopt,
                                    double tolerance = 1e-12);

struct NormEstimate {
    double ratio;
    Window window;
};

/// sup over windows (lengths from the grid) of sqrt(var(phi, J)) / xi(|J|).
NormEstimate xi_norm(const StepFunction& phi, const Modulus& xi,
                     const std::optional<LengthGrid>& lengths = std::nullopt);

}  // namespace oscil
