#include "chimhd/asymptotics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace chimhd {
namespace {

constexpr double kTolerance = 1e-9;

template <class F>
double integrate(F&& f, double a, double b, double* err) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, err);
}

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

double profile_tanh(double xi) { return std::tanh(xi / std::numbers::sqrt2); }

double well_location(const PotentialKind& kind) {
    if (kind.type() == PotentialKind::Type::GinzburgLandau) return 1.0;
    auto f = [&](double phi) { return potential_f(kind, phi); };
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto [lo, hi] = boost::math::tools::toms748_solve(f, 1e-6, 1.0 - 1e-15, tol, iters);
    return 0.5 * (lo + hi);
}

double iota_mixed_integral(double half_width) {
    const auto gl = PotentialKind::ginzburg_landau();
    auto integrand = [&](double xi) {
        const double s = sech(xi / std::numbers::sqrt2);
        const double dphi = s * s / std::numbers::sqrt2;
        return dphi * std::sqrt(2.0 * potential_F(gl, profile_tanh(xi)));
    };
    double err = 0.0;
    return integrate(integrand, -half_width, half_width, &err);
}

IotaResult iota_quadrature(const PotentialKind& kind, double half_width) {
    IotaResult r;
    const double well = well_location(kind);
    const double f_min = potential_F(kind, kind.type() == PotentialKind::Type::GinzburgLandau ? 1.0 : well);
    auto phi_integrand = [&](double phi) {
        const double d = potential_F(kind, phi) - f_min;
        return d > 0.0 ? std::sqrt(2.0 * d) : 0.0;
    };
    double err_phi = 0.0;
    r.phi_integral = integrate(phi_integrand, -well, well, &err_phi);

    if (kind.type() == PotentialKind::Type::GinzburgLandau) {
        if (!(half_width > 0.0)) throw std::invalid_argument("iota_quadrature: half_width must be positive");
        auto xi_integrand = [](double xi) {
            const double s = sech(xi / std::numbers::sqrt2);
            return 0.5 * s * s * s * s;
        };
        double err_xi = 0.0;
        r.xi_integral = integrate(xi_integrand, -half_width, half_width, &err_xi);
        // Both tails of (1/2) sech^4(xi/sqrt2) <= 8 exp(-2 sqrt2 xi).
        const double tail = 2.0 * 2.0 * std::numbers::sqrt2 * std::exp(-2.0 * std::numbers::sqrt2 * half_width);
        r.value = r.xi_integral;
        r.error_estimate = err_xi + tail;
    } else {
        r.value = r.phi_integral;
        r.xi_integral = r.phi_integral;
        r.error_estimate = err_phi;
    }
    if (!(r.error_estimate <= kTolerance)) {
        throw std::runtime_error("iota_quadrature: quadrature did not converge");
    }
    return r;
}

}  // namespace chimhd
