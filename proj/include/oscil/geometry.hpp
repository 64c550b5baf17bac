#pragma once

#include "oscil/modulus.hpp"
#include "oscil/step_function.hpp"

namespace oscil {

/// (mean, second moment) coordinates.
struct PlanePoint {
    double x1;
    double x2;
};

struct StripMembership {
    bool inside;
    double lower_margin;  // x2 - x1^2
    double upper_margin;  // x1^2 + xi^2(t) - x2
};

struct TauU {
    double tau;
    double u;
    /// Set when rounding put the point above the top parabola and tau was
    /// clamped to t.
    bool clamped = false;
};

/// Extremal-curve geometry of a smooth modulus (power or linear kind) with
/// xi' > 0 and t^2 xi^2 convex.
class GeometryContext {
public:
    explicit GeometryContext(Modulus xi);

    const Modulus& modulus() const noexcept { return xi_; }
    double horizon() const noexcept { return xi_.horizon(); }

    /// r(s) = sqrt(xi^2 + 2 s xi xi'), r(0) = 0.
    double r_value(double s) const;

    /// Gamma(tau) = (tau r(tau), tau (r^2(tau) + xi^2(tau))).
    PlanePoint gamma(double tau) const;
    /// Gamma(tau) / t.
    PlanePoint gamma_t(double t, double tau) const;
    /// gamma^t_2 - (gamma^t_1)^2; increases on [0, t] up to xi^2(t).
    double gap(double t, double tau) const;

    StripMembership strip_contains(double t, PlanePoint p) const;

    /// The unique (tau, u), tau in [0, t], with
    ///   y1 = u + gamma^t_1(tau),  y2 = u^2 + 2 u gamma^t_1(tau) + gamma^t_2(tau).
    TauU solve_tau_u(double y1, double y2, double t) const;

private:
    // closed forms, valid for every s >= 0 (gamma is defined past the horizon)
    double xi_at(double s) const;
    double xi_prime_at(double s) const;
    double r_at(double s) const;

    Modulus xi_;
};

struct UPair {
    double u_short;  // U(p, t1)
    double u_long;   // U(p, t2)
    bool ordered;    // u_short < u_long + 1e-12
};

/// U at the same point for two scales 0 < t1 < t2; p must lie in the strip
/// of scale t1 strictly above the lower parabola.
UPair u_monotone_in_t(const GeometryContext& ctx, PlanePoint p, double t1, double t2);

/// U(<phi>_I, <phi^2>_I, |I|), an upper bound for inf phi when phi's norm is
/// at most 1. The norm is checked on the default length grid.
double inf_bound(const GeometryContext& ctx, const StepFunction& phi);

/// Same without the norm check, for callers that already normalized phi.
double inf_bound_unchecked(const GeometryContext& ctx, const StepFunction& phi);

}  // namespace oscil
