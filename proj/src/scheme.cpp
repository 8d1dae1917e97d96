#include "chimhd/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "chimhd/diagnostics.hpp"
#include "chimhd/spectral.hpp"

namespace chimhd {

namespace {

void require_dt(double dt, const char* who) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument(std::string(who) + ": dt must be > 0");
}

double interior_face_mean(const FaceField& f) {
    const GridSpec& g = f.grid();
    double s = 0.0;
    std::size_t n = 0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i, ++n) s += f.x(i, j);
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i, ++n) s += f.y(i, j);
    return s / static_cast<double>(n);
}

FaceField times(const FaceField& a, const FaceField& b) {
    FaceField out(a.grid());
    for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = a.values()[k] * b.values()[k];
    return out;
}

/// phi_f * grad mu, the discrete phi grad mu on faces.
FaceField surface_flux(const CellField& phi, const CellField& mu) {
    return times(interp_cell_to_face(phi), grad_cell_to_face(mu));
}

CellField map_cells(const CellField& f, auto&& fn) {
    CellField out(f.grid());
    for (std::size_t k = 0; k < f.size(); ++k) out.values()[k] = fn(f.values()[k]);
    return out;
}

}  // namespace

State::State(const GridSpec& grid)
    : phase(grid), chem(grid), vel(grid), pressure(grid), current(grid), epot(grid) {}

CellField chemical_potential(const CellField& phase, const PhysParams& params) {
    const CellField lap = laplacian_neumann(phase);
    CellField mu(phase.grid());
    for (std::size_t k = 0; k < mu.size(); ++k) {
        mu.values()[k] = -params.gamma * params.eps * lap.values()[k] +
                         params.gamma / params.eps * potential_f(params.potential, phase.values()[k]);
    }
    return mu;
}

FaceField project_divergence_free(const FaceField& u) {
    const GridSpec& g = u.grid();
    FaceField out = u;
    out.zero_boundary();
    CellField rhs = div_face_to_cell(out);
    for (double& v : rhs.values()) v = -v;
    CellField q(g);
    NeumannSolver(g).solve(rhs.values(), q.values(), 0.0, 1.0);
    const FaceField gq = grad_cell_to_face(q);
    axpy(-1.0, gq.values(), out.values());
    out.zero_boundary();
    return out;
}

// ---------------------------------------------------------------- step 1

ChResult ch_step(const State& state, const PhysParams& params, double dt, const SolverSettings& settings) {
    require_dt(dt, "ch_step");
    const GridSpec& g = state.grid();
    const std::size_t n = g.num_cells();
    const double ge = params.gamma * params.eps;
    const double gs = params.gamma * params.s_stab / params.eps;

    const FaceField phi_f = interp_cell_to_face(state.phase);
    const CellField m_cell = map_cells(state.phase, [&](double p) { return params.mobility_at(p); });
    FaceField coeff = interp_cell_to_face(m_cell);
    if (!settings.freeze_velocity) {
        for (std::size_t k = 0; k < coeff.size(); ++k) coeff.values()[k] += dt * phi_f.values()[k] * phi_f.values()[k];
    }
    coeff.zero_boundary();

    const SparseMatrix k_mat = diffusion_matrix(coeff);
    const SparseMatrix neg_lap = diffusion_matrix(FaceField(g, 1.0));

    SparseBuilder sb(2 * n, 2 * n);
    sb.add_block(SparseMatrix::identity(n), 0, 0, 1.0 / dt);
    sb.add_block(k_mat, 0, n);
    sb.add_block(neg_lap, n, 0, ge);
    sb.add_block(SparseMatrix::identity(n), n, 0, gs);
    sb.add_block(SparseMatrix::identity(n), n, n, -1.0);
    const SparseMatrix a = sb.build();

    Vector rhs(2 * n);
    const CellField adv = div_face_to_cell(times(phi_f, state.vel));
    for (std::size_t k = 0; k < n; ++k) {
        const double p = state.phase.values()[k];
        rhs[k] = p / dt - (settings.freeze_velocity ? 0.0 : adv.values()[k]);
        rhs[n + k] = gs * p - params.gamma / params.eps * potential_f(params.potential, p);
    }

    // 2x2 per cosine mode of the constant-coefficient system.
    const NeumannSolver neumann(g);
    const SeparableTransform& tr = neumann.transform();
    const double abar = interior_face_mean(coeff);
    GmresOptions opts;
    opts.restart = settings.restart;
    opts.preconditioner = [&tr, n, dt, abar, ge, gs](std::span<const double> r, std::span<double> z) {
        Vector r1(n), r2(n);
        tr.forward(r.subspan(0, n), r1);
        tr.forward(r.subspan(n, n), r2);
        for (std::size_t k = 0; k < n; ++k) {
            const double lam = tr.lambda(k);
            const double q = ge * lam + gs;
            const double det = -1.0 / dt - abar * lam * q;
            const double ph = (-r1[k] - abar * lam * r2[k]) / det;
            const double mh = (r2[k] / dt - q * r1[k]) / det;
            r1[k] = ph;
            r2[k] = mh;
        }
        tr.inverse(r1, z.subspan(0, n));
        tr.inverse(r2, z.subspan(n, n));
    };
    opts.initial_guess.resize(2 * n);
    std::copy(state.phase.values().begin(), state.phase.values().end(), opts.initial_guess.begin());
    std::copy(state.chem.values().begin(), state.chem.values().end(), opts.initial_guess.begin() + n);

    SolveResult sol = gmres_solve(a, rhs, settings.tol_ch, settings.maxit_ch, opts);
    if (!sol.report.converged) throw SolverError("Cahn-Hilliard step: GMRES did not converge (" + sol.report.note + ")", sol.report);

    ChResult out{CellField(g, Vector(sol.x.begin(), sol.x.begin() + n)),
                 CellField(g, Vector(sol.x.begin() + n, sol.x.end())), sol.report};
    return out;
}

// ---------------------------------------------------------------- step 2

CurrentSolution current_step(const CellField& phase_new, const CellField& chem_new, const FaceField& vel_old,
                             const PhysParams& params, double dt, const SolverSettings& settings,
                             const CellField* phase_force) {
    require_dt(dt, "current_step");
    const GridSpec& g = phase_new.grid();
    const CellField rcell = map_cells(phase_new, [&](double p) { return params.resistivity(p); });
    FaceField coeff = interp_cell_to_face(rcell);
    for (double& v : coeff.values()) v += dt * params.b * params.b;

    // Ohm's law with the intermediate velocity u^n - dt phi grad mu.
    FaceField w = vel_old;
    axpy(-dt, surface_flux(phase_force ? *phase_force : phase_new, chem_new).values(), w.values());
    w.zero_boundary();
    const FaceField rhs = cross_b(w, params.b);
    (void)g;
    return schur_current_solve(coeff, rhs, settings.tol_current, settings.maxit_current);
}

// ---------------------------------------------------------------- step 3

NsResult ns_step(const State& state, const CellField& phase_new, const CellField& chem_new,
                 const FaceField& current_new, const PhysParams& params, double dt,
                 const SolverSettings& settings, const CellField* phase_force) {
    require_dt(dt, "ns_step");
    const GridSpec& g = state.grid();
    const std::size_t nf = g.num_faces();
    const std::size_t nc = g.num_cells();

    const CellField eta = map_cells(phase_new, [&](double p) { return params.viscosity(p); });
    const double eta_bar = mean(eta);

    SparseBuilder sb(nf + nc, nf + nc);
    sb.add_block(SparseMatrix::identity(nf), 0, 0, 1.0 / dt);
    sb.add_block(convection_matrix(state.vel), 0, 0);
    sb.add_block(viscous_matrix(eta), 0, 0, -1.0);
    sb.add_block(grad_matrix(g), 0, nf);
    sb.add_block(div_matrix(g), nf, 0, -1.0);
    const SparseMatrix a = sb.build();

    Vector rhs(nf + nc, 0.0);
    const FaceField sf = surface_flux(phase_force ? *phase_force : phase_new, chem_new);
    const FaceField lorentz = cross_b(current_new, params.b);
    for (std::size_t k = 0; k < nf; ++k) {
        rhs[k] = state.vel.values()[k] / dt - sf.values()[k] + lorentz.values()[k];
    }
    {
        FaceField tmp(g, Vector(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(nf)));
        tmp.zero_boundary();
        std::copy(tmp.values().begin(), tmp.values().end(), rhs.begin());
    }

    // Block upper-triangular right preconditioner with a Cahouet-Chabard
    // Schur approximation.
    const NeumannSolver neumann(g);
    const VelocitySolver vsolve(g);
    const SparseMatrix gm = grad_matrix(g);
    GmresOptions opts;
    opts.restart = settings.restart;
    opts.preconditioner = [&, nf, nc, dt, eta_bar](std::span<const double> r, std::span<double> z) {
        std::span<double> zu = z.subspan(0, nf);
        std::span<double> zp = z.subspan(nf, nc);
        std::span<const double> rp = r.subspan(nf, nc);
        Vector lap_inv(nc);
        neumann.solve(rp, lap_inv, 0.0, 1.0);
        double m = 0.0;
        for (double v : rp) m += v;
        m /= static_cast<double>(nc);
        for (std::size_t k = 0; k < nc; ++k) zp[k] = -(lap_inv[k] / dt + eta_bar * (rp[k] - m));
        Vector ru(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(nf));
        const Vector gp = gm * std::span<const double>(zp.data(), nc);
        axpy(-1.0, gp, ru);
        vsolve.solve(ru, zu, 1.0 / dt, eta_bar);
    };
    opts.initial_guess.resize(nf + nc);
    std::copy(state.vel.values().begin(), state.vel.values().end(), opts.initial_guess.begin());
    std::copy(state.pressure.values().begin(), state.pressure.values().end(),
              opts.initial_guess.begin() + static_cast<std::ptrdiff_t>(nf));

    SolveResult sol = gmres_solve(a, rhs, settings.tol_ns, settings.maxit_ns, opts);
    if (!sol.report.converged) throw SolverError("Navier-Stokes step: GMRES did not converge (" + sol.report.note + ")", sol.report);

    FaceField u(g, Vector(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(nf)));
    CellField p(g, Vector(sol.x.begin() + static_cast<std::ptrdiff_t>(nf), sol.x.end()));
    u.zero_boundary();

    // Remove the continuity residual left by GMRES.
    CellField dv = div_face_to_cell(u);
    for (double& v : dv.values()) v = -v;
    CellField q(g);
    neumann.solve(dv.values(), q.values(), 0.0, 1.0);
    axpy(-1.0, grad_cell_to_face(q).values(), u.values());
    u.zero_boundary();
    axpy(1.0 / dt, q.values(), p.values());
    remove_mean(p);
    return NsResult{std::move(u), std::move(p), sol.report};
}

// ---------------------------------------------------------------- advance

std::pair<State, StepDiagnostics> advance(const State& state, const PhysParams& params, double dt,
                                          const SolverSettings& settings) {
    require_dt(dt, "advance");
    StepDiagnostics d;
    d.energy_before = total_energy(state, params).total;

    State next = state;
    if (!settings.freeze_phase) {
        ChResult ch = ch_step(state, params, dt, settings);
        next.phase = std::move(ch.phase);
        next.chem = std::move(ch.chem);
        d.report_ch = ch.report;
    } else {
        d.report_ch.converged = true;
    }

    if (!settings.freeze_velocity) {
        const CellField* force_phase = settings.surface_phase == SurfacePhase::Lagged ? &state.phase : nullptr;
        CurrentSolution cur = current_step(next.phase, next.chem, state.vel, params, dt, settings, force_phase);
        d.report_current = cur.report;
        NsResult ns = ns_step(state, next.phase, next.chem, cur.current, params, dt, settings, force_phase);
        d.report_ns = ns.report;
        next.current = std::move(cur.current);
        next.epot = std::move(cur.epot);
        next.vel = std::move(ns.vel);
        next.pressure = std::move(ns.pressure);
    } else {
        d.report_current.converged = true;
        d.report_ns.converged = true;
    }
    next.time = state.time + dt;

    d.energy_after = total_energy(next, params).total;
    d.dissipation_increment = d.energy_before - d.energy_after;
    d.dissipation_rate = dissipation_rate(next, params);
    d.phase_mass = integral(next.phase);
    d.charge_residual = max_abs(div_face_to_cell(next.current));
    d.div_u_residual = max_abs(div_face_to_cell(next.vel));
    return {std::move(next), d};
}

// ---------------------------------------------------------------- initial data

std::pair<double, double> vortex_velocity(double x, double y) {
    return {x * x * (1 - x) * (1 - x) * y * (1 - y) * (1 - 2 * y), -x * (1 - x) * (1 - 2 * x) * y * y * (1 - y) * (1 - y)};
}

FaceField init_vortex(const GridSpec& g) {
    if (std::abs(g.lx() - 1.0) > 1e-14 || std::abs(g.ly() - 1.0) > 1e-14) {
        throw std::invalid_argument("init_vortex: requires the unit square");
    }
    FaceField u(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) u.x(i, j) = vortex_velocity(g.xn(i), g.yc(j)).first;
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) u.y(i, j) = vortex_velocity(g.xc(i), g.yn(j)).second;
    return project_divergence_free(u);
}

CellField init_rounded_square(const GridSpec& g, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("init_rounded_square: eps must be > 0");
    CellField phi(g);
    const double w = std::sqrt(2.0) * eps;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double dx = g.xc(i) - 0.5, dy = g.yc(j) - 0.5;
            const double r4 = std::pow(dx * dx * dx * dx + dy * dy * dy * dy, 0.25);
            phi(i, j) = std::tanh((r4 - 0.3) / w);
        }
    }
    return phi;
}

CellField init_two_bubbles(const GridSpec& g, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("init_two_bubbles: eps must be > 0");
    CellField phi(g);
    const double w = std::sqrt(2.0) * eps;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.xc(i), y = g.yc(j);
            const double d1 = std::hypot(x - 0.3, y - 0.5), d2 = std::hypot(x - 0.7, y - 0.5);
            phi(i, j) = 1.0 - std::tanh((d1 - 0.1) / w) - std::tanh((d2 - 0.2) / w);
        }
    }
    return phi;
}

CellField init_droplet(const GridSpec& g, double eps, double cx, double cy, double r, double inside) {
    if (!(eps > 0.0) || !(r > 0.0)) throw std::invalid_argument("init_droplet: eps and r must be > 0");
    if (inside != 1.0 && inside != -1.0) throw std::invalid_argument("init_droplet: inside must be +1 or -1");
    CellField phi(g);
    const double w = std::sqrt(2.0) * eps;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) phi(i, j) = inside * std::tanh((r - std::hypot(g.xc(i) - cx, g.yc(j) - cy)) / w);
    return phi;
}

}  // namespace chimhd
