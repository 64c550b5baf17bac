#include "oscil/campaigns.hpp"
#include "oscil/serialization.hpp"

#include <doctest.h>

#include <cmath>

using namespace oscil;

namespace {

const Interval unit{0.0, 1.0};

}  // namespace

TEST_CASE("campaign reduction") {
    const std::vector<std::uint64_t> seeds{5, 3, 9, 1, 7};
    const auto trial = [](std::uint64_t s) {
        Trial t;
        if (s == 9) {
            t.skipped = true;
            return t;
        }
        t.margin = s == 3 || s == 7 ? -1.0 : 0.5;
        return t;
    };
    for (unsigned threads : {1u, 3u}) {
        const VerificationReport r = run_campaign("toy", 0.1, seeds, trial, threads);
        CHECK(r.trials == 4);
        CHECK(r.skipped == 1);
        CHECK(r.failures == 2);
        CHECK(r.worst_margin == -1.0);
        // ties go to the smallest seed
        CHECK(r.witness["seed"] == 3);
        CHECK_FALSE(r.passed());
    }
    CHECK_THROWS_AS(run_campaign("toy", 0.1, std::vector<std::uint64_t>{}, trial), ArgumentError);
}

TEST_CASE("seed ranges and profile lengths") {
    CHECK(seed_range(3, 6) == std::vector<std::uint64_t>{3, 4, 5});
    CHECK_THROWS_AS(seed_range(3, 3), ArgumentError);
    const auto l = profile_lengths(2.0, 4);
    CHECK(l == std::vector<double>{0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("normalization reaches unit norm") {
    const Modulus xi = Modulus::power(0.5, 1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StepFunction phi = random_step_function(seed, 8, {-1.0, 1.0}, unit);
        const StepFunction n = normalize_to_unit_norm(phi, xi, 256);
        CHECK(n.integral() == doctest::Approx(phi.integral()).epsilon(1e-12));
        if (phi.min_value() == phi.max_value()) {
            CHECK(n == phi);
            continue;
        }
        double shortest = 1.0;
        for (std::size_t k = 0; k < n.piece_count(); ++k) shortest = std::min(shortest, n.piece_length(k));
        const std::size_t count = std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(4.0 / shortest)));
        CHECK(xi_norm(n, xi, LengthGrid::uniform(1.0, count)).ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("rearrangement campaign") {
    SUBCASE("random seeds") {
        const auto seeds = seed_range(0, 200);
        const VerificationReport r = verify_rearrangement(seeds);
        CHECK(r.passed());
        CHECK(r.trials == 200);
        // deterministic, whatever the worker count
        CampaignSettings one;
        one.threads = 1;
        CHECK(to_json(verify_rearrangement(seeds, one)).dump() == to_json(r).dump());
        // the witness re-runs to the same margin
        const Trial again = rearrangement_trial(r.witness["seed"].get<std::uint64_t>(), {});
        CHECK(std::abs(again.margin - r.worst_margin) <= 1e-12);
    }
    SUBCASE("monotone and two-valued functions have equal profiles") {
        const auto ls = profile_lengths(1.0, 64);
        for (const StepFunction& phi : {StepFunction(unit, {0.3, 0.8}, {2.0, 1.0, -1.0}),
                                        StepFunction(unit, {0.3}, {0.0, 1.0})}) {
            const auto p = oscillation_profile(phi, ls);
            const auto q = oscillation_profile(decreasing_rearrangement(phi), ls);
            for (std::size_t i = 0; i < ls.size(); ++i) CHECK(std::abs(p.xi_values[i] - q.xi_values[i]) <= 1e-15);
        }
    }
}

TEST_CASE("convex minorant campaign") {
    const auto seeds = seed_range(0, 100);
    CampaignSettings s;
    s.pieces_max = 12;
    const VerificationReport r = verify_thcor(seeds, s);
    CHECK(r.passed());
    const Trial again = thcor_trial(r.witness["seed"].get<std::uint64_t>(), s);
    CHECK(std::abs(again.margin - r.worst_margin) <= 1e-12);
}

TEST_CASE("monotone convexity campaign") {
    const VerificationReport r = verify_pr00(seed_range(0, 100));
    CHECK(r.passed());
    CHECK(r.trials == 100);

    // the staircase of s: A(t) = t^4 / 12 up to discretization
    const StepFunction psi = linear_staircase(unit, 512, 1.0);
    const auto ls = profile_lengths(1.0, 64);
    const auto p = oscillation_profile(psi, ls);
    std::vector<double> grid{0.0};
    std::vector<double> a{0.0};
    for (std::size_t i = 0; i < ls.size(); ++i) {
        grid.push_back(ls[i]);
        a.push_back(ls[i] * ls[i] * p.xi_values[i] * p.xi_values[i]);
        CHECK(std::abs(a.back() - std::pow(ls[i], 4) / 12.0) < 1e-5);
    }
    for (double d : second_differences(grid, a)) CHECK(d >= 0.0);
}

TEST_CASE("cutout campaign") {
    const GeometryContext ctx(Modulus::power(0.5, 1.0, 1.0));
    SUBCASE("random seeds") {
        const VerificationReport r = verify_cutout(seed_range(0, 150), ctx);
        CHECK(r.passed());
        CHECK(r.skipped > 0);  // constants are skipped
        CHECK(r.trials + r.skipped == 150);
    }
    SUBCASE("unique extreme pieces") {
        const StepFunction phi(unit, {0.2, 0.45, 0.7}, {0.1, 0.9, 0.4, 0.3});
        const StepFunction n = normalize_to_unit_norm(phi, ctx.modulus(), 256);
        const std::vector<std::size_t> extremes{0, 1};
        const StepFunction psi = cutout_pieces(n, extremes).function;
        CHECK(psi.domain().length() == doctest::Approx(0.55));
        CHECK(norm_bound_check(psi, ctx.modulus(), 1.0, LengthGrid::uniform(0.55, 141), 1e-9).passed());
    }
}

TEST_CASE("inf bound campaign") {
    for (const Modulus& xi : {Modulus::power(0.5, 1.0, 1.0), Modulus::linear(1.0, 1.0)}) {
        const GeometryContext ctx(xi);
        const VerificationReport r = verify_inf_bound(seed_range(0, 100), ctx);
        CHECK(r.passed());
    }
    const GeometryContext ctx(Modulus::power(0.5, 1.0, 1.0));
    CHECK(inf_bound_unchecked(ctx, StepFunction::constant(unit, -0.3)) == -0.3);
}

TEST_CASE("parabolic dilation campaign") {
    const GeometryContext ctx(Modulus::power(2.0 / 3.0, 1.0, 1.0));
    const VerificationReport r = verify_lem55(seed_range(0, 500), ctx);
    CHECK(r.passed());
    CHECK(r.trials == 500);
    const Trial again = lem55_trial(r.witness["seed"].get<std::uint64_t>(), ctx);
    CHECK(again.margin == r.worst_margin);

    SUBCASE("fixed points of the dilation") {
        const auto dilate = [](PlanePoint x, double a, double k) {
            return PlanePoint{a + k * (x.x1 - a), a * a + k * (x.x2 - a * a)};
        };
        // a = x1 on the lower parabola: nothing moves
        const PlanePoint x{0.4, 0.4 * 0.4};
        const PlanePoint y = dilate(x, 0.4, 2.5);
        CHECK(y.x1 == x.x1);
        CHECK(y.x2 == x.x2);
        CHECK(ctx.strip_contains(0.2, y).inside);
        // s = t: the identity, and x was built inside the strip of scale t
        const PlanePoint g = ctx.gamma_t(0.5, 0.3);
        const PlanePoint z = dilate(g, -0.2, 1.0);
        CHECK(ctx.strip_contains(0.5, z).inside);
    }
}

TEST_CASE("linear staircase against linear moduli") {
    SUBCASE("unit slope") {
        const LinearStaircaseReport r = verify_th0_linear(1.0, Modulus::linear(1.0, 1.0));
        CHECK(r.report.passed());
        CHECK(r.dominates);
        CHECK(r.max_variance_gap <= r.gap_bound);
        CHECK(r.max_variance_gap <= 4e-6);
    }
    SUBCASE("zero slope") {
        const LinearStaircaseReport r = verify_th0_linear(0.0, Modulus::linear(1.0, 1.0));
        CHECK(r.report.passed());
        CHECK(r.max_variance_gap == 0.0);
    }
    SUBCASE("calibrated threshold 3 / sqrt 12") {
        const Modulus xi = Modulus::linear(1.0, 1.0);
        const double c = 3.0 / std::sqrt(12.0);
        const LinearStaircaseReport above = verify_th0_linear(3.0, xi, c + 1e-3, 4096);
        const LinearStaircaseReport below = verify_th0_linear(3.0, xi, c - 1e-3, 4096);
        CHECK(above.report.passed());
        CHECK_FALSE(below.report.passed());
        CHECK_FALSE(above.dominates);
        CHECK(below.report.witness["length"].get<double>() == doctest::Approx(1.0));
    }
}
