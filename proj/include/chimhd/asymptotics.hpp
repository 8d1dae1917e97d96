/// @file asymptotics.hpp
/// @brief 1D equilibrium-profile oracle: the leading-order inner solution and
/// the surface-tension constant iota = int |phi0'(xi)|^2 dxi.
#pragma once

#include "chimhd/physics.hpp"

namespace chimhd {

/// Leading-order inner profile for the Ginzburg-Landau well: tanh(xi / sqrt 2).
double profile_tanh(double xi);

struct IotaResult {
    double value = 0.0;           ///< iota
    double xi_integral = 0.0;     ///< int |phi0'|^2 dxi over [-L, L] (GL only, else = value)
    double phi_integral = 0.0;    ///< int sqrt(2 (F - F_min)) dphi between the wells
    double error_estimate = 0.0;  ///< quadrature + truncation bound of `value`
};

/// Ginzburg-Landau: xi-integral of (1/2) sech^4(xi/sqrt2) on [-half_width, half_width],
/// cross-checked by the equipartition phi-integral. Flory-Huggins: the
/// phi-integral between the two interior wells. Throws std::runtime_error when
/// the error bound exceeds 1e-9.
IotaResult iota_quadrature(const PotentialKind& kind, double half_width = 20.0);

/// int phi0'(xi) sqrt(2 F(phi0(xi))) dxi for the GL profile (the mixed form of iota).
double iota_mixed_integral(double half_width = 20.0);

/// Location phi* in (0,1) of the positive well of `kind` (1 for Ginzburg-Landau).
double well_location(const PotentialKind& kind);

}  // namespace chimhd
