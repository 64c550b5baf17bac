#include "oscil/campaigns.hpp"

#include "oscil/convex_minorant.hpp"
#include "oscil/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace oscil {

namespace {

const Interval kUnit{0.0, 1.0};

nlohmann::json function_json(const StepFunction& phi) {
    return {{"domain", {phi.domain().left(), phi.domain().right()}},
            {"breakpoints", phi.breakpoints()},
            {"values", phi.values()}};
}

StepFunction random_phi(std::uint64_t seed, const CampaignSettings& s) {
    return random_step_function(seed, s.pieces_max, s.values, kUnit);
}

// Relative second differences min_i D_i / scale, with scale = max |values|.
struct Convexity {
    double margin = 0.0;
    std::size_t index = 0;
};

Convexity relative_convexity(std::span<const double> grid, std::span<const double> values) {
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    Convexity out;
    if (scale == 0.0 || values.size() < 3) return out;
    const auto d = second_differences(grid, values);
    out.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i])) continue;
        if (d[i] / scale < out.margin) {
            out.margin = d[i] / scale;
            out.index = i;
        }
    }
    if (!std::isfinite(out.margin)) out.margin = 0.0;
    return out;
}

// Node count whose step is at most a quarter of phi's shortest piece, so the
// grid-level norm sees every piece.
std::size_t resolving_count(const StepFunction& phi, std::size_t at_least) {
    double shortest = phi.domain().length();
    for (std::size_t k = 0; k < phi.piece_count(); ++k) shortest = std::min(shortest, phi.piece_length(k));
    const double needed = std::ceil(4.0 * phi.domain().length() / shortest);
    return std::max(at_least, static_cast<std::size_t>(std::min(needed, 65536.0)));
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OSCILLIB_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t last_exclusive) {
    if (last_exclusive <= first) throw ArgumentError("seed_range: empty range");
    std::vector<std::uint64_t> out(last_exclusive - first);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = first + i;
    return out;
}

std::vector<double> profile_lengths(double domain_length, std::size_t grid_size) {
    if (grid_size == 0) throw ArgumentError("profile_lengths: empty grid");
    std::vector<double> out(grid_size);
    for (std::size_t k = 1; k <= grid_size; ++k) {
        out[k - 1] = k == grid_size ? domain_length : domain_length * static_cast<double>(k) / grid_size;
    }
    return out;
}

VerificationReport run_campaign(const std::string& name, double tolerance, std::span<const std::uint64_t> seeds,
                                const TrialFn& trial, unsigned threads) {
    if (seeds.empty()) throw ArgumentError("run_campaign: empty seed list");
    std::vector<Trial> results(seeds.size());
    const unsigned workers = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(seeds.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i) results[i] = trial(seeds[i]);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < seeds.size(); i += workers) results[i] = trial(seeds[i]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    // ties go to the smallest seed
    std::vector<std::size_t> order(seeds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return seeds[a] < seeds[b]; });

    VerificationReport report;
    report.name = name;
    report.tolerance = tolerance;
    for (std::size_t i : order) {
        Trial& t = results[i];
        if (t.skipped) {
            ++report.skipped;
            continue;
        }
        t.witness["seed"] = seeds[i];
        report.record(t.margin, t.witness);
    }
    if (report.trials == 0) report.worst_margin = 0.0;
    return report;
}

StepFunction normalize_to_unit_norm(const StepFunction& phi, const Modulus& xi, std::size_t norm_grid) {
    if (phi.min_value() == phi.max_value()) return phi;
    const double len = phi.domain().length();
    const NormEstimate est = xi_norm(phi, xi, default_length_grid(xi, len, resolving_count(phi, norm_grid)));
    if (!(est.ratio > 0.0)) return phi;
    const double mean = phi.integral() / len;
    // phi -> mean + (phi - mean) / ratio
    return affine_image(phi, 1.0 / est.ratio, mean - mean / est.ratio);
}

Trial rearrangement_trial(std::uint64_t seed, const CampaignSettings& settings) {
    const StepFunction phi = random_phi(seed, settings);
    const StepFunction star = decreasing_rearrangement(phi);
    const auto lengths = profile_lengths(phi.domain().length(), settings.grid_size);
    const auto p = oscillation_profile(phi, lengths);
    const auto q = oscillation_profile(star, lengths);
    Trial t;
    t.margin = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double m = (p.xi_values[i] - q.xi_values[i]) / (p.xi_values[i] + 1e-3);
        if (m < t.margin) {
            t.margin = m;
            at = i;
        }
    }
    t.witness = {{"t", lengths[at]}, {"xi_phi", p.xi_values[at]}, {"xi_star", q.xi_values[at]},
                 {"phi", function_json(phi)}};
    return t;
}

Trial thcor_trial(std::uint64_t seed, const CampaignSettings& settings) {
    const StepFunction phi = random_phi(seed, settings);
    const StepFunction star = decreasing_rearrangement(phi);
    const auto lengths = profile_lengths(phi.domain().length(), settings.grid_size);
    const auto p = oscillation_profile(phi, lengths);
    const auto q = oscillation_profile(star, lengths);

    SampledFunction f;
    f.grid.push_back(0.0);
    f.values.push_back(0.0);
    f.grid.insert(f.grid.end(), lengths.begin(), lengths.end());
    f.values.insert(f.values.end(), p.xi_values.begin(), p.xi_values.end());
    const SampledFunction conv = parabolic_convex_minorant(f);

    double scale = *std::max_element(p.xi_values.begin(), p.xi_values.end());
    if (!(scale > 0.0)) scale = 1.0;
    Trial t;
    t.margin = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double m = (conv.values[i + 1] - q.xi_values[i]) / scale;
        if (m < t.margin) {
            t.margin = m;
            at = i;
        }
    }
    t.witness = {{"t", lengths[at]}, {"conv", conv.values[at + 1]}, {"xi_star", q.xi_values[at]},
                 {"phi", function_json(phi)}};
    return t;
}

Trial pr00_trial(std::uint64_t seed, const CampaignSettings& settings) {
    StepFunction psi = decreasing_rearrangement(random_phi(seed, settings));
    const bool increasing = seed % 2 == 1;
    if (increasing) psi = affine_image(decreasing_rearrangement(affine_image(psi, -1.0, 0.0)), -1.0, 0.0);

    const double len = psi.domain().length();
    const auto lengths = profile_lengths(len, settings.grid_size);
    const auto prof = oscillation_profile(psi, lengths);

    std::vector<double> grid{0.0};
    std::vector<double> a{0.0};
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        grid.push_back(lengths[i]);
        a.push_back(lengths[i] * lengths[i] * prof.xi_values[i] * prof.xi_values[i]);
    }
    Trial t;
    const Convexity ca = relative_convexity(grid, a);
    t.margin = ca.margin;
    t.witness = {{"check", "profile"}, {"t", grid[ca.index + 1]}, {"increasing", increasing}};

    // windows growing from a random anchor, rightwards and leftwards
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const Interval& I = psi.domain();
    const double anchor_right = rng.uniform(I.left(), I.left() + 0.9 * len);
    const double anchor_left = rng.uniform(I.left() + 0.1 * len, I.right());
    for (int dir = 0; dir < 2; ++dir) {
        const double span = dir == 0 ? I.right() - anchor_right : anchor_left - I.left();
        const auto ts = uniform_grid(0.0, span, settings.grid_size);
        std::vector<double> F(ts.size(), 0.0);
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const Interval J = dir == 0 ? Interval(anchor_right, std::min(anchor_right + ts[i], I.right()))
                                        : Interval(std::max(anchor_left - ts[i], I.left()), anchor_left);
            const IntervalStats st = stats(psi, J);
            F[i] = ts[i] * ts[i] * st.variance;
        }
        const Convexity cf = relative_convexity(ts, F);
        if (cf.margin < t.margin) {
            t.margin = cf.margin;
            t.witness = {{"check", dir == 0 ? "anchor_right" : "anchor_left"},
                         {"anchor", dir == 0 ? anchor_right : anchor_left},
                         {"t", ts[cf.index + 1]},
                         {"increasing", increasing}};
        }
    }
    t.witness["psi"] = function_json(psi);
    return t;
}

Trial cutout_trial(std::uint64_t seed, const GeometryContext& ctx, const CampaignSettings& settings) {
    const Modulus& xi = ctx.modulus();
    const StepFunction raw = random_phi(seed, settings);
    Trial t;
    if (raw.min_value() == raw.max_value()) {
        t.skipped = true;
        return t;
    }
    const StepFunction phi = normalize_to_unit_norm(raw, xi, settings.norm_grid);
    const double len = phi.domain().length();
    const double h = len / static_cast<double>(resolving_count(raw, settings.norm_grid));
    auto grid_on = [&](double d) {
        LengthGrid g;
        for (std::size_t k = 1; k * h <= d * (1.0 + 1e-12); ++k) g.nodes.push_back(std::min(k * h, d));
        g.refine = xi.smooth();
        return g;
    };
    auto norm_margin = [&](const StepFunction& psi) {
        const LengthGrid g = grid_on(psi.domain().length());
        if (g.nodes.empty()) return std::numeric_limits<double>::infinity();
        return norm_bound_check(psi, xi, 1.0, g, 1e-9).worst_margin;
    };

    // extreme-value pieces
    std::vector<std::size_t> extreme;
    for (std::size_t i = 0; i < phi.piece_count(); ++i) {
        if (phi.value(i) == phi.min_value() || phi.value(i) == phi.max_value()) extreme.push_back(i);
    }
    t.margin = std::numeric_limits<double>::infinity();
    t.witness = {{"phi", function_json(phi)}};
    if (extreme.size() < phi.piece_count()) {
        const CutoutResult cut = cutout_pieces(phi, extreme);
        t.margin = norm_margin(cut.function);
        t.witness["check"] = "extremes";
    } else {
        t.skipped = true;
    }

    // one middle segment [t1, t2] of the rearrangement: truncate at the
    // levels met there, then cut out the pieces sent before t1 and after t2
    const auto order = rearrangement_order(phi);
    const std::size_t n = order.size();
    if (n >= 2) {
        Rng rng(seed ^ 0xd1b54a32d192ed03ULL);
        std::size_t i1 = 0;
        std::size_t i2 = n;
        while (i1 == 0 && i2 == n) {
            i1 = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n - 1)));
            i2 = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(i1 + 1), static_cast<std::int64_t>(n)));
        }
        double t1 = 0.0;
        for (std::size_t k = 0; k < i1; ++k) t1 += phi.piece_length(order[k]);
        double d = 0.0;
        for (std::size_t k = i1; k < i2; ++k) d += phi.piece_length(order[k]);
        const double b = phi.value(order[i1]);
        const double a = phi.value(order[i2 - 1]);
        const StepFunction clipped = truncate(phi, a, b);
        std::vector<std::size_t> removed;
        for (std::size_t k = 0; k < n; ++k) {
            if (k < i1 || k >= i2) removed.push_back(order[k]);
        }
        std::sort(removed.begin(), removed.end());
        const StepFunction psi = cutout_pieces(clipped, removed).function;

        const StepFunction star = decreasing_rearrangement(phi);
        const double t2 = std::min(t1 + d, len);
        const IntervalStats mid = stats(star, Interval(star.domain().left() + t1, star.domain().left() + t2));
        const IntervalStats whole = stats(psi, psi.domain());
        const double scale = std::max(1.0, mid.second_moment);
        const double same_distribution = -std::abs(mid.variance - whole.variance) / scale;

        const double xi_phi = oscillation_profile(phi, std::vector<double>{t2 - t1}).xi_values[0];
        const double rearranged = (xi_phi * xi_phi - mid.variance) / scale;

        const double reduced = norm_margin(psi);
        const double m = std::min({same_distribution + 1e-12, rearranged, reduced});
        if (m < t.margin) {
            t.margin = m;
            t.witness["check"] = "middle_segment";
        }
        t.witness["t1"] = t1;
        t.witness["t2"] = t2;
        t.skipped = false;
    }
    if (!std::isfinite(t.margin)) t.skipped = true;
    return t;
}

Trial inf_bound_trial(std::uint64_t seed, const GeometryContext& ctx, const CampaignSettings& settings) {
    const StepFunction phi = normalize_to_unit_norm(random_phi(seed, settings), ctx.modulus(), settings.norm_grid);
    const StepFunction neg = affine_image(phi, -1.0, 0.0);
    const double u = inf_bound_unchecked(ctx, phi);
    const double u_neg = inf_bound_unchecked(ctx, neg);
    Trial t;
    const double m_inf = u - phi.min_value();
    const double m_sup = u_neg - neg.min_value();
    t.margin = std::min(m_inf, m_sup);
    t.witness = {{"phi", function_json(phi)},
                 {"min", phi.min_value()},
                 {"bound", u},
                 {"max", phi.max_value()},
                 {"mirror_bound", -u_neg}};
    return t;
}

Trial lem55_trial(std::uint64_t seed, const GeometryContext& ctx) {
    Rng rng(seed);
    const double T = ctx.horizon();
    const double t = T * rng.uniform(0.05, 1.0);
    const double tau = t * rng.uniform();
    const double a = rng.uniform(-2.0, 2.0);
    const double r = ctx.r_value(t);
    const double shift = rng.uniform(0.0, 2.0 * std::max(r, 1e-3));
    const double s = t * rng.uniform(0.01, 1.0);

    // parabolic shift by -a: (a, a^2) moves to the origin, U - a = shift >= 0
    const PlanePoint g = ctx.gamma_t(t, tau);
    const PlanePoint x{shift + g.x1, shift * shift + 2.0 * shift * g.x1 + g.x2};
    const double k = t / s;
    const PlanePoint y{k * x.x1, k * x.x2};
    const double xs = ctx.modulus().eval(s);

    Trial out;
    out.margin = y.x1 * y.x1 + xs * xs - y.x2;
    out.witness = {{"t", t}, {"tau", tau}, {"a", a}, {"u", a + shift}, {"s", s},
                   {"x", {x.x1 + a, x.x2 + 2.0 * a * x.x1 + a * a}},
                   {"y", {y.x1 + a, y.x2 + 2.0 * a * y.x1 + a * a}}};
    return out;
}

VerificationReport verify_rearrangement(std::span<const std::uint64_t> seeds, const CampaignSettings& settings) {
    return run_campaign("rearrangement", settings.tolerance.value_or(1e-9), seeds,
                        [&](std::uint64_t s) { return rearrangement_trial(s, settings); }, settings.threads);
}

VerificationReport verify_thcor(std::span<const std::uint64_t> seeds, const CampaignSettings& settings) {
    return run_campaign("thcor", settings.tolerance.value_or(1e-7), seeds, [&](std::uint64_t s) { return thcor_trial(s, settings); },
                        settings.threads);
}

VerificationReport verify_pr00(std::span<const std::uint64_t> seeds, const CampaignSettings& settings) {
    return run_campaign("pr00", settings.tolerance.value_or(1e-9), seeds, [&](std::uint64_t s) { return pr00_trial(s, settings); },
                        settings.threads);
}

VerificationReport verify_cutout(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                 const CampaignSettings& settings) {
    return run_campaign("cutout", settings.tolerance.value_or(1e-9), seeds, [&](std::uint64_t s) { return cutout_trial(s, ctx, settings); },
                        settings.threads);
}

VerificationReport verify_inf_bound(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                    const CampaignSettings& settings) {
    return run_campaign("inf_bound", settings.tolerance.value_or(1e-9), seeds,
                        [&](std::uint64_t s) { return inf_bound_trial(s, ctx, settings); }, settings.threads);
}

VerificationReport verify_lem55(std::span<const std::uint64_t> seeds, const GeometryContext& ctx,
                                const CampaignSettings& settings) {
    return run_campaign("lem55", settings.tolerance.value_or(1e-10), seeds, [&](std::uint64_t s) { return lem55_trial(s, ctx); },
                        settings.threads);
}

LinearStaircaseReport verify_th0_linear(double slope, const Modulus& xi, double bound, std::size_t pieces,
                                        std::size_t grid_size) {
    const StepFunction psi = linear_staircase(kUnit, pieces, slope);
    const double width = 1.0 / static_cast<double>(pieces);
    const auto lengths = profile_lengths(1.0, grid_size);
    LinearStaircaseReport out;
    out.dominates = true;
    for (double l : lengths) out.dominates = out.dominates && xi.eval(l) >= slope * l * (1.0 - 1e-12);
    out.report = norm_bound_check(psi, xi, bound, LengthGrid{lengths, false}, 1e-12);
    out.report.name = "th0_linear";
    out.max_variance_gap = 0.0;
    for (double l : lengths) {
        const Window w = max_variance_at_length(psi, l);
        const double J = w.interval.length();
        out.max_variance_gap = std::max(out.max_variance_gap, std::abs(w.variance - slope * slope * J * J / 12.0));
    }
    out.gap_bound = slope * slope * width * width;
    return out;
}

}  // namespace oscil
