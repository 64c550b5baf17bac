#include "oscil/geometry.hpp"
#include "oscil/oscillation.hpp"
#include "oscil/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace oscil;

namespace {

std::vector<Modulus> smooth_moduli() {
    return {Modulus::power(0.25, 1.0, 1.0), Modulus::power(0.5, 1.0, 1.0), Modulus::power(2.0 / 3.0, 1.5, 1.0),
            Modulus::linear(1.0, 1.0)};
}

// tau' with gamma^t_1(tau') = x1
double abscissa_preimage(const GeometryContext& ctx, double t, double x1) {
    double lo = 0.0;
    double hi = 1.0;
    while (ctx.gamma_t(t, hi).x1 < x1) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ctx.gamma_t(t, mid).x1 < x1 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("context preconditions") {
    CHECK_THROWS_AS(GeometryContext(Modulus::sampled({0.0, 1.0}, {0.0, 1.0})), ArgumentError);
    CHECK_NOTHROW(GeometryContext(Modulus::power(0.5, 1.0, 1.0)));
}

TEST_CASE("r against closed forms") {
    for (double alpha : {0.25, 0.5, 1.0}) {
        const GeometryContext ctx(Modulus::power(alpha, 1.0, 1.0));
        CHECK(ctx.r_value(0.0) == 0.0);
        for (double s : {0.01, 0.3, 1.0}) {
            CHECK(ctx.r_value(s) == doctest::Approx(std::sqrt(1.0 + 2.0 * alpha) * std::pow(s, alpha)).epsilon(1e-14));
        }
        CHECK_THROWS_AS(ctx.r_value(1.5), DomainError);
        CHECK_THROWS_AS(ctx.r_value(-0.1), DomainError);
    }
    const GeometryContext lin(Modulus::linear(1.0, 1.0));
    CHECK(lin.r_value(0.4) == doctest::Approx(std::sqrt(3.0) * 0.4).epsilon(1e-15));
}

TEST_CASE("gamma") {
    const GeometryContext ctx(Modulus::linear(1.0, 1.0));
    CHECK(ctx.gamma(0.0).x1 == 0.0);
    CHECK(ctx.gamma(0.0).x2 == 0.0);
    for (double tau : {0.1, 0.5, 0.9}) {
        CHECK(ctx.gamma(tau).x1 == doctest::Approx(std::sqrt(3.0) * tau * tau).epsilon(1e-14));
        CHECK(ctx.gamma(tau).x2 == doctest::Approx(4.0 * tau * tau * tau).epsilon(1e-14));
        CHECK(ctx.gamma_t(0.5, tau).x1 == doctest::Approx(2.0 * ctx.gamma(tau).x1).epsilon(1e-15));
    }
    CHECK_THROWS_AS(ctx.gamma(-0.1), DomainError);
    CHECK_THROWS_AS(ctx.gamma_t(0.0, 0.1), DomainError);
}

TEST_CASE("tangency at tau = t") {
    for (double alpha : {0.25, 0.5, 1.0}) {
        const GeometryContext ctx(Modulus::power(alpha, 1.0, 1.0));
        for (double t : {0.1, 0.5, 1.0}) CHECK(std::abs(ctx.gap(t, t) - std::pow(t, 2.0 * alpha)) <= 1e-12);
    }
}

TEST_CASE("monotonicity of Gamma and of Gamma2 / Gamma1") {
    for (double alpha : {0.25, 0.5, 2.0 / 3.0, 1.0}) {
        const GeometryContext ctx(Modulus::power(alpha, 1.0, 1.0));
        PlanePoint prev = ctx.gamma(1e-3);
        for (int i = 2; i <= 400; ++i) {
            const PlanePoint g = ctx.gamma(i * 2.5e-3);
            CHECK(g.x1 > prev.x1);
            CHECK(g.x2 > prev.x2);
            CHECK(g.x2 / g.x1 > prev.x2 / prev.x1);
            prev = g;
        }
    }
}

TEST_CASE("the curve of a larger scale lies above") {
    for (const Modulus& xi : smooth_moduli()) {
        const GeometryContext ctx(xi);
        for (auto [t1, t2] : {std::pair{0.2, 0.5}, std::pair{0.5, 1.0}, std::pair{0.1, 0.9}}) {
            for (int i = 1; i <= 50; ++i) {
                const double tau = t2 * i / 50.0;
                const PlanePoint p = ctx.gamma_t(t2, tau);
                const double sigma = abscissa_preimage(ctx, t1, p.x1);
                CHECK(p.x2 - ctx.gamma_t(t1, sigma).x2 >= -1e-12);
            }
        }
    }
}

TEST_CASE("gap rises to xi^2(t) at tau = t and falls after") {
    for (const Modulus& xi : smooth_moduli()) {
        const GeometryContext ctx(xi);
        for (double t : {0.2, 0.5}) {
            double prev = ctx.gap(t, 0.0);
            CHECK(prev == 0.0);
            for (int i = 1; i <= 200; ++i) {
                const double g = ctx.gap(t, t * i / 200.0);
                CHECK(g > prev);
                prev = g;
            }
            for (int i = 201; i <= 400; ++i) {
                const double g = ctx.gap(t, t * i / 200.0);
                CHECK(g < prev);
                prev = g;
            }
            const double x = xi.eval(t);
            CHECK(std::abs(ctx.gap(t, t) - x * x) <= 1e-12);
        }
    }
}

TEST_CASE("t s (r^2(s) + xi^2(s)) <= s^2 r^2(s) + t^2 xi^2(t)") {
    for (const Modulus& xi : smooth_moduli()) {
        const GeometryContext ctx(xi);
        for (int i = 1; i <= 40; ++i) {
            for (int j = 1; j <= 40; ++j) {
                const double s = i / 40.0;
                const double t = j / 40.0;
                const double r = ctx.r_value(s);
                const double xs = xi.eval(s);
                const double xt = xi.eval(t);
                const double margin = s * s * r * r + t * t * xt * xt - t * s * (r * r + xs * xs);
                if (i == j) {
                    CHECK(std::abs(margin) < 1e-12);
                } else {
                    CHECK(margin > 0.0);
                }
            }
        }
    }
}

TEST_CASE("strip membership") {
    const Modulus xi = Modulus::power(0.5, 1.0, 1.0);
    const GeometryContext ctx(xi);
    const double t = 0.5;
    const StripMembership on_parabola = ctx.strip_contains(t, {0.7, 0.49});
    CHECK(on_parabola.inside);
    CHECK(on_parabola.lower_margin == doctest::Approx(0.0));
    const StripMembership top = ctx.strip_contains(t, {0.0, t});
    CHECK(top.inside);
    CHECK(top.upper_margin == doctest::Approx(0.0));
    CHECK_FALSE(ctx.strip_contains(t, {0.0, 2.0 * t}).inside);
    CHECK_FALSE(ctx.strip_contains(t, {1.0, 0.5}).inside);
}

TEST_CASE("solve tau and u") {
    for (const Modulus& xi : smooth_moduli()) {
        const GeometryContext ctx(xi);
        SUBCASE("lower parabola") {
            const TauU s = ctx.solve_tau_u(0.3, 0.09, 0.5);
            CHECK(s.tau == 0.0);
            CHECK(s.u == 0.3);
        }
        SUBCASE("points on the curve") {
            for (double tau0 : {0.05, 0.2, 0.45}) {
                const PlanePoint g = ctx.gamma_t(0.5, tau0);
                const TauU s = ctx.solve_tau_u(g.x1, g.x2, 0.5);
                CHECK(s.tau == doctest::Approx(tau0).epsilon(1e-9));
                CHECK(std::abs(s.u) < 1e-10);
            }
        }
        SUBCASE("residuals, homogeneity and the bracket for U") {
            Rng rng(77);
            for (int i = 0; i < 300; ++i) {
                const double t = rng.uniform(0.01, 1.0);
                const double y1 = rng.uniform(-2.0, 2.0);
                const double x = xi.eval(t);
                const double y2 = y1 * y1 + rng.uniform() * x * x;
                const TauU s = ctx.solve_tau_u(y1, y2, t);
                CHECK(s.tau >= 0.0);
                CHECK(s.tau <= t);
                const PlanePoint g = ctx.gamma_t(t, s.tau);
                CHECK(std::abs(s.u + g.x1 - y1) < 1e-10);
                CHECK(std::abs(s.u * s.u + 2.0 * s.u * g.x1 + g.x2 - y2) < 1e-10);
                CHECK(s.u <= y1 + 1e-12);
                CHECK(s.u >= y1 - ctx.r_value(t) - 1e-12);

                const double c = 1.7;
                const TauU h = ctx.solve_tau_u(y1 + c, y2 + 2.0 * c * y1 + c * c, t);
                CHECK(std::abs(h.tau - s.tau) < 1e-9);
                CHECK(std::abs(h.u - (s.u + c)) < 1e-9);
            }
        }
        SUBCASE("errors and the clamp") {
            CHECK_THROWS_AS(ctx.solve_tau_u(0.0, -0.1, 0.5), PreconditionError);
            const double x = xi.eval(0.5);
            CHECK_THROWS_AS(ctx.solve_tau_u(0.0, 2.0 * x * x, 0.5), PreconditionError);
            CHECK_THROWS_AS(ctx.solve_tau_u(0.0, 0.0, 1.5), DomainError);
            const TauU top = ctx.solve_tau_u(0.0, x * x * (1.0 + 1e-14), 0.5);
            CHECK(top.tau == 0.5);
            CHECK(top.clamped);
        }
    }
}

TEST_CASE("single crossing of each inner parabola") {
    const GeometryContext ctx(Modulus::power(0.5, 1.0, 1.0));
    const double t = 0.8;
    for (double c : {0.1, 0.4, 0.85}) {
        const double level = c * c;  // C^2 with C < xi(t)
        int crossings = 0;
        double prev = ctx.gap(t, 0.0) - level;
        for (int i = 1; i <= 2000; ++i) {
            const double cur = ctx.gap(t, t * i / 2000.0) - level;
            if ((prev < 0.0) != (cur < 0.0)) ++crossings;
            prev = cur;
        }
        CHECK(crossings == 1);
    }
}

TEST_CASE("U grows with the scale") {
    const GeometryContext ctx(Modulus::power(0.5, 1.0, 1.0));
    const UPair p = u_monotone_in_t(ctx, {0.1, 0.05}, 0.3, 0.6);
    CHECK(p.u_short < p.u_long);
    CHECK(p.ordered);

    for (const Modulus& xi : smooth_moduli()) {
        const GeometryContext g(xi);
        Rng rng(5);
        for (int i = 0; i < 100; ++i) {
            const double t1 = rng.uniform(0.05, 0.9);
            const double t2 = rng.uniform(t1 + 1e-3, 1.0);
            const double y1 = rng.uniform(-1.0, 1.0);
            const double x = xi.eval(t1);
            const PlanePoint q{y1, y1 * y1 + rng.uniform(0.01, 1.0) * x * x};
            CHECK(u_monotone_in_t(g, q, t1, t2).ordered);
        }
    }
    CHECK_THROWS_AS(u_monotone_in_t(ctx, {0.1, 0.01}, 0.3, 0.6), PreconditionError);
    CHECK_THROWS_AS(u_monotone_in_t(ctx, {0.1, 0.05}, 0.6, 0.3), ArgumentError);
}

TEST_CASE("inf bound") {
    const GeometryContext ctx(Modulus::power(0.5, 1.0, 1.0));
    const Interval unit(0.0, 1.0);
    CHECK(inf_bound(ctx, StepFunction::constant(unit, 0.4)) == 0.4);

    const StepFunction small = linear_staircase(unit, 256, 0.5);
    CHECK(norm_bound_check(small, ctx.modulus(), 1.0).passed());
    CHECK(small.min_value() <= inf_bound(ctx, small));

    const StepFunction large(unit, {0.5}, {0.0, 5.0});
    CHECK_THROWS_AS(inf_bound(ctx, large), PreconditionError);
}
