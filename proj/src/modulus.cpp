#include "oscil/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace oscil {

double SampledFunction::operator()(double t) const {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

Modulus Modulus::power(double alpha, double scale, double horizon) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("power modulus: alpha must lie in (0, 1]");
    if (!(scale > 0.0)) throw ArgumentError("power modulus: scale must be positive");
    if (!(horizon > 0.0)) throw ArgumentError("modulus: horizon must be positive");
    return Modulus(PowerModulus{alpha, scale}, horizon);
}

Modulus Modulus::linear(double slope, double horizon) {
    if (!(slope > 0.0)) throw ArgumentError("linear modulus: slope must be positive");
    if (!(horizon > 0.0)) throw ArgumentError("modulus: horizon must be positive");
    return Modulus(LinearModulus{slope}, horizon);
}

Modulus Modulus::sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size()) {
        throw ArgumentError("sampled modulus: need at least two nodes and one value per node");
    }
    if (grid.front() != 0.0) throw ArgumentError("sampled modulus: grid must start at 0");
    if (values.front() != 0.0) throw ArgumentError("sampled modulus: value at 0 must be 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ArgumentError("sampled modulus: grid must be strictly increasing");
        if (!(values[i] >= values[i - 1])) {
            throw ArgumentError("sampled modulus: values must be non-decreasing (node " +
                                std::to_string(i) + ")");
        }
    }
    const double horizon = grid.back();
    return Modulus(SampledModulus{SampledFunction{std::move(grid), std::move(values)}}, horizon);
}

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

double Modulus::eval(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw DomainError(fmt::format("modulus: t = {} outside [0, {}]", t, horizon_));
    }
    return std::visit(Overloaded{
                          [&](const PowerModulus& p) { return t == 0.0 ? 0.0 : p.scale * std::pow(t, p.alpha); },
                          [&](const LinearModulus& l) { return l.slope * t; },
                          [&](const SampledModulus& s) { return s.samples(t); },
                      },
                      kind_);
}

double Modulus::eval_derivative(double t) const {
    if (!(t > 0.0 && t <= horizon_)) {
        throw DomainError(fmt::format("modulus derivative: t = {} outside (0, {}]", t, horizon_));
    }
    return std::visit(Overloaded{
                          [&](const PowerModulus& p) { return p.scale * p.alpha * std::pow(t, p.alpha - 1.0); },
                          [&](const LinearModulus& l) { return l.slope; },
                          [&](const SampledModulus& s) {
                              const double h = std::max(1e-6 * horizon_, 1e-9);
                              const double lo = std::max(t - h, 0.0);
                              const double hi = std::min(t + h, horizon_);
                              return (s.samples(hi) - s.samples(lo)) / (hi - lo);
                          },
                      },
                      kind_);
}

std::string Modulus::describe() const {
    return std::visit(Overloaded{
                          [&](const PowerModulus& p) { return fmt::format("power:{}:{}", p.alpha, p.scale); },
                          [&](const LinearModulus& l) { return fmt::format("linear:{}", l.slope); },
                          [&](const SampledModulus& s) {
                              return fmt::format("sampled[{} nodes]", s.samples.grid.size());
                          },
                      },
                      kind_);
}

std::vector<double> second_differences(std::span<const double> grid, std::span<const double> values) {
    if (grid.size() != values.size()) throw ArgumentError("second_differences: size mismatch");
    std::vector<double> out;
    if (grid.size() < 3) return out;
    out.reserve(grid.size() - 2);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double hl = grid[i] - grid[i - 1];
        const double hr = grid[i + 1] - grid[i];
        const double chord = (values[i - 1] * hr + values[i + 1] * hl) / (hl + hr);
        out.push_back(2.0 * (chord - values[i]));
    }
    return out;
}

bool check_A_convex(const Modulus& xi, std::span<const double> grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = xi.eval(grid[i]);
    return check_A_convex(grid, values);
}

bool check_A_convex(std::span<const double> grid, std::span<const double> xi_values) {
    if (grid.size() != xi_values.size()) throw ArgumentError("check_A_convex: size mismatch");
    std::vector<double> a(grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = grid[i] * grid[i] * xi_values[i] * xi_values[i];
        scale = std::max(scale, std::abs(a[i]));
    }
    for (double d : second_differences(grid, a)) {
        if (d < -1e-12 * scale) return false;
    }
    return true;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t intervals) {
    if (intervals == 0) throw ArgumentError("uniform_grid: need at least one interval");
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
    }
    g.back() = hi;
    return g;
}

}  // namespace oscil
