/// @file diagnostics.hpp
/// @brief Energies, dissipation and sharp-interface residuals measured on
/// discrete states.
#pragma once

#include "chimhd/contour.hpp"
#include "chimhd/physics.hpp"
#include "chimhd/scheme.hpp"

namespace chimhd {

struct EnergyBreakdown {
    double kinetic = 0.0;               ///< 1/2 <u, u>
    double interfacial_gradient = 0.0;  ///< gamma eps / 2 <grad phi, grad phi>
    double interfacial_bulk = 0.0;      ///< gamma / eps sum (F(phi) - F_min) |cell|
    double total = 0.0;

    double interfacial() const { return interfacial_gradient + interfacial_bulk; }
};

/// F is shifted by its minimum over the wells, so the bulk part is >= 0 for
/// both potentials (the shift is zero for Ginzburg-Landau).
EnergyBreakdown total_energy(const State& state, const PhysParams& params);

struct DissipationBreakdown {
    double viscous = 0.0;  ///< -<2 div(eta D u), u> = sum 2 eta |D u|^2
    double diffusive = 0.0;  ///< <M_f grad mu, grad mu>
    double ohmic = 0.0;    ///< <sigma_f^{-1} J, J>
    double total = 0.0;
};

DissipationBreakdown dissipation_breakdown(const State& state, const PhysParams& params);
double dissipation_rate(const State& state, const PhysParams& params);

/// Mean of the stress pressure p + phi mu over cells deeper than `band`
/// inside the (single) closed contour minus the mean over cells farther than
/// `band` outside. Throws std::invalid_argument when either set is empty or
/// the contour is not a single closed polyline.
double pressure_jump(const State& state, const Contour& c, double band);

/// |mean mu over |phi| < 0.9 - s lambda_hat / (2R)| / (lambda_hat / (2R)),
/// R from circle_fit, s = +1 when the droplet interior is the phi > 0 phase.
/// Throws std::invalid_argument unless the mobility is Case I.
double gibbs_thomson_residual(const State& state, const Contour& c, const PhysParams& params);

/// max over |phi| < 0.9 of |(eps^2/2)|grad phi|^2 - (F(phi) - F_min)| divided
/// by the barrier height F(0) - F_min. Gradients are cell-centred averages of
/// the face differences. Throws std::invalid_argument on an empty band.
double equipartition_residual(const CellField& phi, const PhysParams& params);

struct StefanSample {
    double lhs_rms = 0.0;       ///< rms over vertices of 2 (-V + u . nu)
    double rhs_rms = 0.0;       ///< rms of [M d_nu mu], (phi > 0 side) - (phi < 0 side)
    double mismatch_rms = 0.0;  ///< rms of lhs - rhs
    int samples = 0;
};

/// Both sides of 2(-V + u.nu) = [M d_nu mu] at the vertices of `c`. V is the
/// displacement from the nearest point of `contour_prev` projected on the
/// normal, divided by dt; nu is the left normal of the contour, which points
/// towards phi > 0. One-sided derivatives use bilinear samples of mu at
/// distances 2.5 eps and 2.5 eps + 2h from the interface. Throws
/// std::invalid_argument for Case III mobility, empty contours or dt <= 0.
StefanSample stefan_flux(const State& state, const Contour& c, const Contour& contour_prev, double dt,
                         const PhysParams& params);

/// mismatch_rms / max(lhs_rms, rhs_rms); 0 when both sides vanish.
double stefan_flux_residual(const State& state, const Contour& c, const Contour& contour_prev, double dt,
                            const PhysParams& params);

/// Bilinear interpolation of cell-centred data, clamped to the cell-centre hull.
double sample_cell(const CellField& f, double x, double y);
/// Bilinear interpolation of the x / y face components of a velocity.
double sample_face_x(const FaceField& u, double x, double y);
double sample_face_y(const FaceField& u, double x, double y);

}  // namespace chimhd
