#include "oscil/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace oscil {

namespace {

struct Vertex {
    double t;
    double g;
};

// Piecewise-linear convex polygon through ascending vertices, extended
// affinely past the last one.
double polygon_value(const std::vector<Vertex>& vertices, double right_slope, double t) {
    if (t >= vertices.back().t) return vertices.back().g + right_slope * (t - vertices.back().t);
    auto it = std::upper_bound(vertices.begin(), vertices.end(), t,
                               [](double x, const Vertex& v) { return x < v.t; });
    const Vertex& hi = *it;
    const Vertex& lo = *(it - 1);
    return lo.g + (hi.g - lo.g) * (t - lo.t) / (hi.t - lo.t);
}

}  // namespace

MajorantResult lemma_fn_majorant(const Modulus& xi, double t0, double delta, const MajorantOptions& options) {
    const double horizon = xi.horizon();
    if (!(t0 > 0.0 && t0 <= horizon)) {
        throw ArgumentError(fmt::format("lemma_fn_majorant: t0 = {} outside (0, {}]", t0, horizon));
    }
    if (!(delta > 0.0)) throw ArgumentError("lemma_fn_majorant: delta must be positive");
    if (options.grid_intervals < 2) throw ArgumentError("lemma_fn_majorant: grid too coarse");

    const auto grid = uniform_grid(0.0, horizon, options.grid_intervals);
    const double step = horizon / static_cast<double>(options.grid_intervals);
    auto big_g = [&](double t) { return t * xi.eval(std::min(t, horizon)); };

    // Sample points used to certify chord >= G on [lo, hi]: the grid nodes
    // inside plus `chord_check_density` points per grid cell.
    auto chord_above = [&](double lo, double g_lo, double hi, double g_hi) {
        const double slope = (g_hi - g_lo) / (hi - lo);
        const std::size_t cells = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil((hi - lo) / step)) * options.chord_check_density);
        for (std::size_t i = 0; i <= cells; ++i) {
            const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
            if (g_lo + slope * (t - lo) < big_g(t)) return false;
        }
        const auto first = std::lower_bound(grid.begin(), grid.end(), lo);
        for (auto it = first; it != grid.end() && *it <= hi; ++it) {
            if (g_lo + slope * (*it - lo) < big_g(*it)) return false;
        }
        return true;
    };

    const double xi0 = xi.eval(t0);
    const double g0 = t0 * (xi0 + delta);

    // Right of t0: affine, steeper than every chord from P0 to the graph and
    // than the ray through P0, so the polygon stays convex at t0.
    double right_slope = g0 / t0;
    for (double t : grid) {
        if (t <= t0) continue;
        right_slope = std::max(right_slope, (big_g(t) - g0) / (t - t0));
        for (std::size_t s = 1; s < options.chord_check_density; ++s) {
            const double u = t - step * static_cast<double>(s) / static_cast<double>(options.chord_check_density);
            if (u > t0) right_slope = std::max(right_slope, (big_g(u) - g0) / (u - t0));
        }
    }
    right_slope += 1e-9 * std::max(1.0, std::abs(right_slope));

    // Left of t0: the chain of chords along the rays.
    std::vector<Vertex> chain{{t0, g0}};
    std::vector<double> slopes;
    double prev_slope = right_slope;
    double ray = xi0;
    constexpr double kShrink = 0.97;
    while (chain.back().t >= step) {
        ray *= 0.5;
        const Vertex prev = chain.back();
        bool found = false;
        double candidate = 0.5 * prev.t * (1.0 - 1e-12);
        for (std::size_t m = 0; m < options.max_candidates_per_ray; ++m, candidate *= kShrink) {
            const double g_cand = ray * candidate;
            if (g_cand < big_g(candidate)) continue;
            const double slope = (prev.g - g_cand) / (prev.t - candidate);
            if (!(slope < prev_slope)) continue;
            if (!chord_above(candidate, g_cand, prev.t, prev.g)) continue;
            chain.push_back({candidate, g_cand});
            slopes.push_back(slope);
            prev_slope = slope;
            found = true;
            break;
        }
        if (!found) {
            throw ConstructionError(fmt::format(
                "lemma_fn_majorant: no admissible vertex on ray {} below t = {}", slopes.size() + 1, prev.t));
        }
    }
    const double closing = chain.back().g / chain.back().t;
    if (!(closing <= prev_slope)) {
        throw ConstructionError("lemma_fn_majorant: closing segment would break convexity");
    }

    std::vector<Vertex> vertices{{0.0, 0.0}};
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) vertices.push_back(*it);

    std::vector<double> out_grid = grid;
    for (const Vertex& v : chain) out_grid.push_back(v.t);
    std::sort(out_grid.begin(), out_grid.end());
    out_grid.erase(std::unique(out_grid.begin(), out_grid.end()), out_grid.end());

    std::vector<double> values(out_grid.size(), 0.0);
    for (std::size_t i = 1; i < out_grid.size(); ++i) {
        const double t = out_grid[i];
        values[i] = t == t0 ? xi0 + delta : polygon_value(vertices, right_slope, t) / t;
        // G~/t is non-decreasing for a convex G~ through the origin; remove rounding dips
        values[i] = std::max(values[i], values[i - 1]);
    }

    MajorantResult result{Modulus::sampled(std::move(out_grid), std::move(values)), {}, slopes, right_slope};
    for (const Vertex& v : chain) result.vertex_abscissas.push_back(v.t);
    return result;
}

}  // namespace oscil
