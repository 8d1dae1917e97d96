/// @file physics.hpp
/// @brief Pointwise closures: double-well potentials, mobilities, material
/// blending and the planar Lorentz algebra for B = b e_z.
#pragma once

#include <utility>

namespace chimhd {

/// Ginzburg-Landau F = (phi^2 - 1)^2 / 4, or Flory-Huggins
/// F = (1+phi)/2 ln((1+phi)/2) + (1-phi)/2 ln((1-phi)/2) + theta/4 (phi^2-1)^2.
class PotentialKind {
public:
    enum class Type { GinzburgLandau, FloryHuggins };

    static PotentialKind ginzburg_landau() { return PotentialKind(Type::GinzburgLandau, 0.0); }
    /// Throws std::invalid_argument unless theta > 2.
    static PotentialKind flory_huggins(double theta);

    Type type() const { return type_; }
    double theta() const { return theta_; }
    bool operator==(const PotentialKind&) const = default;

private:
    PotentialKind(Type t, double theta) : type_(t), theta_(theta) {}
    Type type_;
    double theta_;
};

/// Flory-Huggins evaluations with |phi| >= 1 throw std::domain_error.
double potential_F(const PotentialKind& kind, double phi);
double potential_f(const PotentialKind& kind, double phi);
double potential_fprime(const PotentialKind& kind, double phi);

enum class MobilityCase { I, II, III };

struct Mobility {
    MobilityCase kind = MobilityCase::I;
    double m0 = 1.0;
    bool operator==(const Mobility&) const = default;
};

/// Case I: m0; Case II: eps*m0; Case III: m0*max(1 - phi^2, 0).
double mobility(const Mobility& m, double eps, double phi);

/// Linear blend between the pure-phase values (phi = -1 -> p1, phi = +1 -> p2)
/// with phi clamped to [-1, 1]. Throws on nonpositive p1 or p2.
double blend(double p1, double p2, double phi);

/// Planar reduction of (vx, vy, 0) x (0, 0, b).
std::pair<double, double> cross_with_B(double vx, double vy, double b);

struct PhysParams {
    double eps = 0.05;
    double gamma = 0.1;
    Mobility mobility{};
    double s_stab = 2.0;
    double eta1 = 1.0;
    double eta2 = 1.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double b = 1.0;
    PotentialKind potential = PotentialKind::ginzburg_landau();

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
    /// Sharp-interface surface tension gamma * iota.
    double lambda_hat() const;

    double viscosity(double phi) const { return blend(eta1, eta2, phi); }
    double resistivity(double phi) const { return blend(1.0 / sigma1, 1.0 / sigma2, phi); }
    double mobility_at(double phi) const { return chimhd::mobility(mobility, eps, phi); }

    bool operator==(const PhysParams&) const = default;
};

}  // namespace chimhd
