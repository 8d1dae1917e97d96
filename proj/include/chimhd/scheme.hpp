/// @file scheme.hpp
/// @brief Decoupled, linear, three-step time integrator:
///   1. Cahn-Hilliard step for (phi, mu) with a lagged mobility and the
///      tau-weighted decoupling term;
///   2. current / electric-potential step with the face-diagonal J-block
///      sigma^{-1} + dt b^2;
///   3. Navier-Stokes step with skew convection, variable viscosity, the
///      surface force -phi grad mu and the Lorentz force J x B.
/// Every step is one linear solve; nothing is iterated to self-consistency.
#pragma once

#include <utility>

#include "chimhd/grid.hpp"
#include "chimhd/krylov.hpp"
#include "chimhd/physics.hpp"
#include "chimhd/saddle.hpp"

namespace chimhd {

struct State {
    explicit State(const GridSpec& grid);

    CellField phase;
    CellField chem;
    FaceField vel;
    CellField pressure;  ///< zero cell-mean
    FaceField current;
    CellField epot;      ///< zero cell-mean
    double time = 0.0;

    const GridSpec& grid() const { return phase.grid(); }
};

/// Which phase field multiplies grad mu in the surface and Ohm forcing of
/// steps 2 and 3.
enum class SurfacePhase {
    New,     ///< phi^{n+1}
    Lagged,  ///< phi^n, the same factor as the decoupling term of step 1
};

struct SolverSettings {
    double tol_ch = 1e-10;
    double tol_current = 1e-12;
    double tol_ns = 1e-10;
    int maxit_ch = 2000;
    int maxit_current = 20000;
    int maxit_ns = 2000;
    int restart = 50;
    /// Velocity held at its current value (steps 2-3 skipped, no decoupling term).
    bool freeze_velocity = false;
    /// Phase and chemical potential held fixed (step 1 skipped).
    bool freeze_phase = false;
    SurfacePhase surface_phase = SurfacePhase::New;

    bool operator==(const SolverSettings&) const = default;
};

struct ChResult {
    CellField phase;
    CellField chem;
    SolveReport report;
};

struct NsResult {
    FaceField vel;
    CellField pressure;
    SolveReport report;
};

struct StepDiagnostics {
    double energy_before = 0.0;
    double energy_after = 0.0;
    double dissipation_increment = 0.0;  ///< energy_before - energy_after
    double dissipation_rate = 0.0;       ///< Phi at the new time level
    double phase_mass = 0.0;             ///< integral of phi
    double charge_residual = 0.0;        ///< max |div J|
    double div_u_residual = 0.0;         ///< max |div u|
    SolveReport report_ch;
    SolveReport report_current;
    SolveReport report_ns;
};

/// Step 1. Throws std::invalid_argument for dt <= 0 and SolverError when
/// GMRES stalls. With settings.freeze_velocity the decoupling term is dropped.
ChResult ch_step(const State& state, const PhysParams& params, double dt, const SolverSettings& settings = {});

/// Step 2. `phase_force` multiplies grad mu in the Ohm forcing (phi^{n+1} as
/// printed, or phi^n under SurfacePhase::Lagged).
CurrentSolution current_step(const CellField& phase_new, const CellField& chem_new, const FaceField& vel_old,
                             const PhysParams& params, double dt, const SolverSettings& settings = {},
                             const CellField* phase_force = nullptr);

/// Step 3. The returned velocity is exactly discrete divergence-free (one
/// Neumann projection after the saddle solve) and the pressure has zero mean.
NsResult ns_step(const State& state, const CellField& phase_new, const CellField& chem_new,
                 const FaceField& current_new, const PhysParams& params, double dt,
                 const SolverSettings& settings = {}, const CellField* phase_force = nullptr);

/// Steps 1-3 in order. Sub-step failures propagate as SolverError.
std::pair<State, StepDiagnostics> advance(const State& state, const PhysParams& params, double dt,
                                          const SolverSettings& settings = {});

/// Chemical potential consistent with phi: gamma eps (-L phi) + (gamma/eps) f(phi).
CellField chemical_potential(const CellField& phase, const PhysParams& params);

/// Orthogonal projection onto discretely divergence-free admissible fields.
FaceField project_divergence_free(const FaceField& u);

// --- initial conditions -----------------------------------------------------

/// (x^2 (1-x)^2 y (1-y)(1-2y), -x (1-x)(1-2x) y^2 (1-y)^2), divergence-free
/// and vanishing on the boundary of the unit square.
std::pair<double, double> vortex_velocity(double x, double y);
/// Face-sampled stream-function vortex, projected to discrete div u = 0.
/// Throws std::invalid_argument unless the domain is the unit square.
FaceField init_vortex(const GridSpec& grid);
/// tanh((|x - c|_4 - 0.3) / (sqrt2 eps)), c = (0.5, 0.5).
CellField init_rounded_square(const GridSpec& grid, double eps);
/// 1 - tanh((|x - x1| - 0.1)/(sqrt2 eps)) - tanh((|x - x2| - 0.2)/(sqrt2 eps)),
/// x1 = (0.3, 0.5), x2 = (0.7, 0.5).
CellField init_two_bubbles(const GridSpec& grid, double eps);
/// Circular droplet of phase `inside` (+1 or -1) and radius r centred at (cx, cy).
CellField init_droplet(const GridSpec& grid, double eps, double cx, double cy, double r, double inside = 1.0);

}  // namespace chimhd
