#include "oscil/mollifier.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <fmt/format.h>

namespace oscil {

namespace {

constexpr double kQuadratureTolerance = 1e-13;

double bump_profile(double x) {
    const double r = 1.0 - x * x;
    return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
}

template <class F>
double integrate_unit(F&& f) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -1.0, 1.0, 15,
                                                                          kQuadratureTolerance, &error);
}

}  // namespace

Bump::Bump(int n) : n_(n) {
    if (n < 1) throw ArgumentError("Bump: n must be >= 1");
}

double Bump::unit_mass() {
    static const double mass = integrate_unit(bump_profile);
    return mass;
}

double Bump::operator()(double u) const {
    const double x = (u - 1.0) * 2.0 * n_;
    return 2.0 * n_ * bump_profile(x) / unit_mass();
}

MollifiedMajorant::MollifiedMajorant(Modulus xi, int n)
    : xi_(std::move(xi)), bump_(n), max_t_(xi_.horizon() * (1.0 - 0.5 / n)) {
    const auto grid = uniform_grid(0.0, xi_.horizon(), 512);
    if (!check_A_convex(xi_, grid)) {
        throw PreconditionError("mollified_majorant: t^2 xi^2(t) is not convex for " + xi_.describe());
    }
}

double MollifiedMajorant::smoothed_square(double t) const {
    if (!(t > 0.0 && t <= max_t_ * (1.0 + 1e-14))) {
        throw DomainError(fmt::format("mollified_majorant: t = {} outside (0, {}]", t, max_t_));
    }
    const double hw = bump_.half_width();
    const double cap = xi_.horizon();
    // u = 1 + hw x maps the bump's support onto (-1, 1)
    auto integrand = [&](double x) {
        const double u = 1.0 + hw * x;
        const double v = xi_.eval(std::min(t * u, cap));
        return v * v * u * u * bump_profile(x);
    };
    return integrate_unit(integrand) / Bump::unit_mass();
}

double MollifiedMajorant::operator()(double t) const {
    return std::sqrt(t / bump_.n() + smoothed_square(t));
}

double MollifiedMajorant::a_function(double t) const {
    return t * t * (t / bump_.n() + smoothed_square(t));
}

double mollified_majorant(const Modulus& xi, int n, double t) { return MollifiedMajorant(xi, n)(t); }

}  // namespace oscil
