#include "oscil/convex_minorant.hpp"

#include <algorithm>
#include <cmath>

namespace oscil {

std::vector<double> lower_convex_envelope(std::span<const double> grid, std::span<const double> values) {
    if (grid.size() != values.size() || grid.empty()) {
        throw ArgumentError("lower_convex_envelope: need matching non-empty samples");
    }
    // Andrew's monotone chain, lower half only; the grid is already sorted.
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t o = hull[hull.size() - 2];
            const std::size_t a = hull.back();
            const double cross = (grid[a] - grid[o]) * (values[i] - values[o]) -
                                 (values[a] - values[o]) * (grid[i] - grid[o]);
            if (cross > 0.0) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    std::vector<double> out(grid.size());
    std::size_t seg = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
        const std::size_t lo = hull[seg];
        if (lo == i) {
            out[i] = values[i];
            continue;
        }
        const std::size_t hi = hull[seg + 1];
        if (hi == i) {
            out[i] = values[i];
            continue;
        }
        const double w = (grid[i] - grid[lo]) / (grid[hi] - grid[lo]);
        out[i] = std::min(values[i], values[lo] + w * (values[hi] - values[lo]));
    }
    return out;
}

SampledFunction parabolic_convex_minorant(const SampledFunction& f) {
    const auto& grid = f.grid;
    if (grid.size() < 2 || grid.size() != f.values.size()) {
        throw ArgumentError("parabolic_convex_minorant: need at least two samples");
    }
    if (grid.front() != 0.0) throw ArgumentError("parabolic_convex_minorant: grid must start at 0");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ArgumentError("parabolic_convex_minorant: grid must be strictly increasing");
        }
        if (!(f.values[i] >= 0.0)) throw ArgumentError("parabolic_convex_minorant: negative sample");
    }
    std::vector<double> big_f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        big_f[i] = grid[i] * grid[i] * f.values[i] * f.values[i];
    }
    const auto env = lower_convex_envelope(grid, big_f);
    SampledFunction g{grid, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        g.values[i] = std::min(f.values[i], std::sqrt(std::max(env[i], 0.0)) / grid[i]);
    }
    return g;
}

}  // namespace oscil
