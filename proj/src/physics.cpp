#include "chimhd/physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "chimhd/asymptotics.hpp"

namespace chimhd {

PotentialKind PotentialKind::flory_huggins(double theta) {
    if (!(theta > 2.0)) throw std::invalid_argument("Flory-Huggins potential needs theta > 2");
    return PotentialKind(Type::FloryHuggins, theta);
}

namespace {

void require_open_interval(double phi) {
    if (!(std::abs(phi) < 1.0)) {
        throw std::domain_error("Flory-Huggins potential is undefined for |phi| >= 1 (phi = " +
                                std::to_string(phi) + ")");
    }
}

}  // namespace

double potential_F(const PotentialKind& kind, double phi) {
    const double w = phi * phi - 1.0;
    if (kind.type() == PotentialKind::Type::GinzburgLandau) return 0.25 * w * w;
    require_open_interval(phi);
    const double a = 0.5 * (1.0 + phi), c = 0.5 * (1.0 - phi);
    return a * std::log(a) + c * std::log(c) + 0.25 * kind.theta() * w * w;
}

double potential_f(const PotentialKind& kind, double phi) {
    if (kind.type() == PotentialKind::Type::GinzburgLandau) return phi * phi * phi - phi;
    require_open_interval(phi);
    return 0.5 * std::log((1.0 + phi) / (1.0 - phi)) + kind.theta() * (phi * phi * phi - phi);
}

double potential_fprime(const PotentialKind& kind, double phi) {
    if (kind.type() == PotentialKind::Type::GinzburgLandau) return 3.0 * phi * phi - 1.0;
    require_open_interval(phi);
    return 1.0 / (1.0 - phi * phi) + kind.theta() * (3.0 * phi * phi - 1.0);
}

double mobility(const Mobility& m, double eps, double phi) {
    switch (m.kind) {
        case MobilityCase::I: return m.m0;
        case MobilityCase::II: return eps * m.m0;
        case MobilityCase::III: return m.m0 * std::max(1.0 - phi * phi, 0.0);
    }
    return m.m0;
}

double blend(double p1, double p2, double phi) {
    if (!(p1 > 0.0) || !(p2 > 0.0)) throw std::invalid_argument("blend: material parameters must be positive");
    const double s = std::clamp(phi, -1.0, 1.0);
    return p1 * 0.5 * (1.0 - s) + p2 * 0.5 * (1.0 + s);
}

std::pair<double, double> cross_with_B(double vx, double vy, double b) { return {vy * b, -vx * b}; }

void PhysParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    positive(eps, "eps");
    positive(gamma, "gamma");
    positive(mobility.m0, "m0");
    positive(eta1, "eta1");
    positive(eta2, "eta2");
    positive(sigma1, "sigma1");
    positive(sigma2, "sigma2");
    if (!(s_stab >= 0.0)) throw std::invalid_argument("s_stab must be >= 0");
    if (!std::isfinite(b)) throw std::invalid_argument("b must be finite");
}

double PhysParams::lambda_hat() const { return gamma * iota_quadrature(potential).value; }

}  // namespace chimhd
