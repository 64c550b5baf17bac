#pragma once

#include "oscil/modulus.hpp"

namespace oscil {

/// Smooth bump supported on [1 - 1/(2n), 1 + 1/(2n)], symmetric about 1 and
/// normalized to unit mass, so that its first moment is 1 as well.
class Bump {
public:
    explicit Bump(int n);

    int n() const noexcept { return n_; }
    double half_width() const noexcept { return 0.5 / n_; }
    double operator()(double u) const;

    /// integral of exp(-1/(1-x^2)) over (-1, 1)
    static double unit_mass();

private:
    int n_;
};

/// xi_n(t) = sqrt(t/n + integral xi^2(t u) u^2 Psi_n(u) du).
///
/// xi must make t^2 xi^2 convex; t ranges over (0, T (1 - 1/(2n))] so that
/// t u stays inside the horizon on the bump's support.
class MollifiedMajorant {
public:
    MollifiedMajorant(Modulus xi, int n);

    double max_argument() const noexcept { return max_t_; }
    double operator()(double t) const;
    /// t^2 xi_n^2(t) = t^3 / n + (A * Psi_n)(t)
    double a_function(double t) const;

private:
    double smoothed_square(double t) const;

    Modulus xi_;
    Bump bump_;
    double max_t_;
};

double mollified_majorant(const Modulus& xi, int n, double t);

}  // namespace oscil
