#include "oscil/geometry.hpp"

#include "oscil/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace oscil {

GeometryContext::GeometryContext(Modulus xi) : xi_(std::move(xi)) {
    if (!xi_.smooth()) {
        throw ArgumentError("GeometryContext: needs a power or linear modulus, got " + xi_.describe());
    }
    const auto probe = uniform_grid(0.0, xi_.horizon(), 64);
    for (std::size_t i = 1; i < probe.size(); ++i) {
        if (!(xi_.eval_derivative(probe[i]) > 0.0)) {
            throw PreconditionError("GeometryContext: xi' must be positive");
        }
    }
    if (!check_A_convex(xi_, probe)) throw PreconditionError("GeometryContext: t^2 xi^2 must be convex");
}

double GeometryContext::xi_at(double s) const {
    if (s <= 0.0) return 0.0;
    if (const auto* p = std::get_if<PowerModulus>(&xi_.kind())) return p->scale * std::pow(s, p->alpha);
    return std::get<LinearModulus>(xi_.kind()).slope * s;
}

double GeometryContext::xi_prime_at(double s) const {
    if (const auto* p = std::get_if<PowerModulus>(&xi_.kind())) {
        return p->scale * p->alpha * std::pow(s, p->alpha - 1.0);
    }
    return std::get<LinearModulus>(xi_.kind()).slope;
}

double GeometryContext::r_at(double s) const {
    if (s <= 0.0) return 0.0;
    const double x = xi_at(s);
    return std::sqrt(x * x + 2.0 * s * x * xi_prime_at(s));
}

double GeometryContext::r_value(double s) const {
    if (!(s >= 0.0 && s <= horizon())) {
        throw DomainError(fmt::format("r_value: s = {} outside [0, {}]", s, horizon()));
    }
    return r_at(s);
}

PlanePoint GeometryContext::gamma(double tau) const {
    if (!(tau >= 0.0)) throw DomainError("gamma: tau must be non-negative");
    const double r = r_at(tau);
    const double x = xi_at(tau);
    return {tau * r, tau * (r * r + x * x)};
}

PlanePoint GeometryContext::gamma_t(double t, double tau) const {
    if (!(t > 0.0)) throw DomainError("gamma_t: t must be positive");
    const PlanePoint g = gamma(tau);
    return {g.x1 / t, g.x2 / t};
}

double GeometryContext::gap(double t, double tau) const {
    const PlanePoint g = gamma_t(t, tau);
    return g.x2 - g.x1 * g.x1;
}

StripMembership GeometryContext::strip_contains(double t, PlanePoint p) const {
    const double x = xi_.eval(t);
    const double lower = p.x2 - p.x1 * p.x1;
    const double upper = p.x1 * p.x1 + x * x - p.x2;
    return {lower >= 0.0 && upper >= 0.0, lower, upper};
}

TauU GeometryContext::solve_tau_u(double y1, double y2, double t) const {
    if (!(t > 0.0 && t <= horizon())) {
        throw DomainError(fmt::format("solve_tau_u: t = {} outside (0, {}]", t, horizon()));
    }
    const double target = y2 - y1 * y1;
    const double top = xi_at(t) * xi_at(t);
    const double slack = 1e-12 * std::max(1.0, std::abs(y2));
    if (target < -slack || target > top + slack) {
        throw PreconditionError(fmt::format("solve_tau_u: ({}, {}) outside the strip of scale {}", y1, y2, t));
    }
    if (target <= 0.0) return {0.0, y1, false};
    if (target >= top) {
        const double g1 = gamma_t(t, t).x1;
        return {t, y1 - g1, target > top};
    }
    // the gap is strictly increasing on [0, t]
    double lo = 0.0;
    double hi = t;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (gap(t, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double tau = std::abs(gap(t, lo) - target) <= std::abs(gap(t, hi) - target) ? lo : hi;
    return {tau, y1 - gamma_t(t, tau).x1, false};
}

UPair u_monotone_in_t(const GeometryContext& ctx, PlanePoint p, double t1, double t2) {
    if (!(t1 > 0.0 && t1 < t2)) throw ArgumentError("u_monotone_in_t: need 0 < t1 < t2");
    const StripMembership m = ctx.strip_contains(t1, p);
    if (!m.inside) throw PreconditionError("u_monotone_in_t: point outside the strip of scale t1");
    if (!(m.lower_margin > 0.0)) throw PreconditionError("u_monotone_in_t: point on the lower parabola");
    const double u1 = ctx.solve_tau_u(p.x1, p.x2, t1).u;
    const double u2 = ctx.solve_tau_u(p.x1, p.x2, t2).u;
    return {u1, u2, u1 < u2 + 1e-12};
}

double inf_bound_unchecked(const GeometryContext& ctx, const StepFunction& phi) {
    const double len = phi.domain().length();
    if (len > ctx.horizon() * (1.0 + 1e-12)) {
        throw ArgumentError("inf_bound: domain longer than the modulus horizon");
    }
    const IntervalStats s = stats(phi, phi.domain());
    return ctx.solve_tau_u(s.mean, s.mean * s.mean + s.variance, std::min(len, ctx.horizon())).u;
}

double inf_bound(const GeometryContext& ctx, const StepFunction& phi) {
    const VerificationReport norm = norm_bound_check(phi, ctx.modulus(), 1.0, std::nullopt, 1e-9);
    if (!norm.passed()) {
        throw PreconditionError(fmt::format("inf_bound: norm exceeds 1 (worst margin {})", norm.worst_margin));
    }
    return inf_bound_unchecked(ctx, phi);
}

}  // namespace oscil
