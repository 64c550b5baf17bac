#pragma once

#include "oscil/errors.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace oscil {

/// Function sampled on an increasing grid; read piecewise-linearly.
struct SampledFunction {
    std::vector<double> grid;
    std::vector<double> values;

    double operator()(double t) const;
};

struct PowerModulus {
    double alpha;
    double scale;
};

struct LinearModulus {
    double slope;
};

struct SampledModulus {
    SampledFunction samples;
};

/// A modulus on [0, T]: continuous, non-decreasing, zero at the origin.
///
/// Power and linear moduli carry a closed-form derivative and are the only
/// kinds accepted by the extremal-curve geometry. Sampled moduli are read
/// piecewise-linearly; their derivative is a clipped central difference.
class Modulus {
public:
    using Kind = std::variant<PowerModulus, LinearModulus, SampledModulus>;

    /// scale * t^alpha, alpha in (0, 1].
    static Modulus power(double alpha, double scale, double horizon);
    static Modulus linear(double slope, double horizon);
    /// grid must start at 0 and be strictly increasing; values start at 0
    /// and are non-negative and non-decreasing.
    static Modulus sampled(std::vector<double> grid, std::vector<double> values);

    double horizon() const noexcept { return horizon_; }
    const Kind& kind() const noexcept { return kind_; }
    bool smooth() const noexcept { return !std::holds_alternative<SampledModulus>(kind_); }

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;
    double eval_derivative(double t) const;

    /// A(t) = t^2 xi^2(t).
    double a_function(double t) const {
        const double x = eval(t);
        return t * t * x * x;
    }

    std::string describe() const;

private:
    Modulus(Kind kind, double horizon) : kind_(std::move(kind)), horizon_(horizon) {}

    Kind kind_;
    double horizon_;
};

/// Generalized second differences of samples on a (possibly non-uniform)
/// grid: for interior node i, twice the gap between the chord through the
/// neighbours and the value at i. On a uniform grid this is
/// v[i-1] - 2 v[i] + v[i+1]. Non-negative everywhere iff the samples are convex.
std::vector<double> second_differences(std::span<const double> grid, std::span<const double> values);

/// True iff A = t^2 xi^2 has second differences >= -1e-12 max|A| on the grid.
bool check_A_convex(const Modulus& xi, std::span<const double> grid);
/// Same test for samples xi(grid[i]) = xi_values[i] that need not form a modulus.
bool check_A_convex(std::span<const double> grid, std::span<const double> xi_values);

/// n + 1 evenly spaced nodes from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t intervals);

}  // namespace oscil
