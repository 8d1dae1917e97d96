#include "chimhd/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chimhd {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string step_tag(int step) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06d", step);
    return buf;
}

void write_cell_scalar(std::ostream& o, const char* name, const CellField& f) {
    o << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.values()) o << num(v) << '\n';
}

void write_cell_vector(std::ostream& o, const char* name, const FaceField& u) {
    const GridSpec& g = u.grid();
    o << "VECTORS " << name << " double\n";
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            o << num(0.5 * (u.x(i, j) + u.x(i + 1, j))) << ' ' << num(0.5 * (u.y(i, j) + u.y(i, j + 1))) << " 0\n";
        }
    }
}

}  // namespace

State initial_state(const RunConfig& c) {
    const GridSpec g(c.nx, c.ny);
    State s(g);
    switch (c.scenario) {
        case Scenario::RoundedSquare: s.phase = init_rounded_square(g, c.phys.eps); break;
        case Scenario::TwoBubbles: s.phase = init_two_bubbles(g, c.phys.eps); break;
        case Scenario::VortexOnly: s.phase = CellField(g, 1.0); break;
        case Scenario::Droplet:
            s.phase = init_droplet(g, c.phys.eps, 0.5, 0.5, c.droplet_radius, c.droplet_inside);
            break;
    }
    s.chem = chemical_potential(s.phase, c.phys);
    if (c.scenario != Scenario::Droplet && !c.solver.freeze_velocity) s.vel = init_vortex(g);
    return s;
}

std::filesystem::path resolve_output_dir(const std::string& output_dir) {
    const std::filesystem::path p(output_dir);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("CHIMHD_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / p;
    return p;
}

std::string csv_header() {
    return "step,time,E_total,E_kinetic,E_interfacial,dissipation,phase_mass,charge_residual,div_u_residual,"
           "iters_ch,iters_current,iters_ns";
}

std::string csv_row(const StepRecord& r) {
    std::ostringstream o;
    o << r.step << ',' << num(r.time) << ',' << num(r.energy.total) << ',' << num(r.energy.kinetic) << ','
      << num(r.energy.interfacial()) << ',' << num(r.dissipation) << ',' << num(r.phase_mass) << ','
      << num(r.charge_residual) << ',' << num(r.div_u_residual) << ',' << r.iters_ch << ',' << r.iters_current << ','
      << r.iters_ns;
    return o.str();
}

void write_vtk(const State& s, const std::filesystem::path& path) {
    std::ofstream o(path);
    if (!o) throw std::runtime_error("cannot write " + path.string());
    const GridSpec& g = s.grid();
    o << "# vtk DataFile Version 3.0\n"
      << "chimhd t=" << num(s.time) << '\n'
      << "ASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx() << ' ' << g.ny() << " 1\n"
      << "ORIGIN " << num(0.5 * g.hx()) << ' ' << num(0.5 * g.hy()) << " 0\n"
      << "SPACING " << num(g.hx()) << ' ' << num(g.hy()) << " 1\n"
      << "POINT_DATA " << g.num_cells() << '\n';
    write_cell_scalar(o, "phase", s.phase);
    write_cell_scalar(o, "chem", s.chem);
    write_cell_scalar(o, "pressure", s.pressure);
    write_cell_scalar(o, "epot", s.epot);
    write_cell_vector(o, "velocity", s.vel);
    write_cell_vector(o, "current", s.current);
}

void write_contour_csv(const Contour& c, const std::filesystem::path& path) {
    std::ofstream o(path);
    if (!o) throw std::runtime_error("cannot write " + path.string());
    o << "poly_id,x,y\n";
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
        for (const Point2& p : c.lines[k].points) o << k << ',' << num(p.x) << ',' << num(p.y) << '\n';
        if (c.lines[k].closed && !c.lines[k].points.empty()) {
            o << k << ',' << num(c.lines[k].points.front().x) << ',' << num(c.lines[k].points.front().y) << '\n';
        }
    }
}

RunResult simulate(const RunConfig& config, const SimulateOptions& opt) {
    config.validate();
    RunResult res;
    State state = initial_state(config);
    const double area = state.grid().lx() * state.grid().ly();
    res.initial_energy = total_energy(state, config.phys);
    res.initial_mass = integral(state.phase);
    res.max_energy_increase = -std::numeric_limits<double>::infinity();

    std::ofstream csv;
    auto snapshot = [&](const State& s, int step) {
        if (!opt.write_output) return;
        write_vtk(s, opt.output_dir / ("snapshot_" + step_tag(step) + ".vtk"));
        const Contour c = extract_contour(s.phase);
        if (!c.empty()) write_contour_csv(c, opt.output_dir / ("contour_" + step_tag(step) + ".csv"));
    };
    if (opt.write_output) {
        std::filesystem::create_directories(opt.output_dir);
        csv.open(opt.output_dir / "diagnostics.csv");
        if (!csv) throw std::runtime_error("cannot write diagnostics.csv in " + opt.output_dir.string());
        csv << csv_header() << '\n';
        std::ofstream(opt.output_dir / "config.txt") << serialize_config(config);
        snapshot(state, 0);
    }

    const int steps = config.num_steps();
    double e_prev = res.initial_energy.total;
    const double e_tol = config.energy_tolerance * std::abs(res.initial_energy.total);
    for (int n = 1; n <= steps; ++n) {
        StepDiagnostics d;
        try {
            auto [next, diag] = advance(state, config.phys, config.dt, config.solver);
            state = std::move(next);
            d = diag;
        } catch (const SolverError& e) {
            res.status = ExitCode::SolverFailure;
            res.message = "step " + std::to_string(n) + ": " + e.what();
            break;
        }
        state.time = n * config.dt;

        StepRecord r;
        r.step = n;
        r.time = state.time;
        r.energy = total_energy(state, config.phys);
        r.dissipation = d.dissipation_rate;
        r.phase_mass = d.phase_mass;
        r.charge_residual = d.charge_residual;
        r.div_u_residual = d.div_u_residual;
        r.iters_ch = d.report_ch.iterations;
        r.iters_current = d.report_current.iterations;
        r.iters_ns = d.report_ns.iterations;
        res.records.push_back(r);
        if (csv.is_open()) csv << csv_row(r) << '\n';
        if (opt.observer) opt.observer(state, r);

        const double rise = r.energy.total - e_prev;
        e_prev = r.energy.total;
        res.max_energy_increase = std::max(res.max_energy_increase, rise);
        res.max_mass_drift = std::max(res.max_mass_drift, std::abs(r.phase_mass - res.initial_mass) / area);
        res.max_charge = std::max(res.max_charge, r.charge_residual);
        res.max_div_u = std::max(res.max_div_u, r.div_u_residual);

        if (n % config.snapshot_every == 0 || n == steps) snapshot(state, n);

        std::string breach;
        if (!std::isfinite(r.energy.total)) breach = "non-finite energy";
        else if (rise > e_tol) breach = "energy increased by " + num(rise);
        else if (r.charge_residual > opt.limits.charge) breach = "max |div J| = " + num(r.charge_residual);
        else if (r.div_u_residual > opt.limits.div_u) breach = "max |div u| = " + num(r.div_u_residual);
        else if (std::abs(r.phase_mass - res.initial_mass) / area > opt.limits.mass)
            breach = "phase mass drift " + num(std::abs(r.phase_mass - res.initial_mass) / area);
        if (!breach.empty() && res.status == ExitCode::Ok) {
            res.status = ExitCode::InvariantBreach;
            res.message = "step " + std::to_string(n) + ": invariant breach: " + breach;
            if (config.abort_on_breach || !std::isfinite(r.energy.total)) break;
        }
    }
    res.final_state = std::move(state);
    return res;
}

int run(const RunConfig& config, std::ostream& log) {
    try {
        config.validate();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::ConfigError);
    }
    SimulateOptions opt;
    opt.write_output = true;
    opt.output_dir = resolve_output_dir(config.output_dir);
    log << "running " << to_string(config.scenario) << " (" << config.nx << "x" << config.ny
        << ", eps=" << config.phys.eps << ", dt=" << config.dt << ", " << config.num_steps() << " steps) -> "
        << opt.output_dir.string() << '\n';
    RunResult r;
    try {
        r = simulate(config, opt);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::SolverFailure);
    }
    if (r.status != ExitCode::Ok) {
        log << r.message << '\n';
        return static_cast<int>(r.status);
    }
    const StepRecord& last = r.records.back();
    log << std::setprecision(10) << "done: t=" << last.time << " E=" << last.energy.total
        << " (E0=" << r.initial_energy.total << ") max dE=" << r.max_energy_increase
        << " mass drift=" << r.max_mass_drift << " max|div J|=" << r.max_charge << " max|div u|=" << r.max_div_u
        << '\n';
    return 0;
}

SweepTable sweep_epsilon(const RunConfig& base, const std::vector<double>& eps_list, double eps_ref, bool write_output,
                         std::ostream* log) {
    if (eps_list.empty()) throw std::invalid_argument("sweep_epsilon: empty eps list");
    for (std::size_t k = 0; k + 1 < eps_list.size(); ++k) {
        if (!(eps_list[k] > eps_list[k + 1])) throw std::invalid_argument("sweep_epsilon: eps list must be strictly decreasing");
    }
    if (!(eps_ref > 0.0) || !(eps_ref < eps_list.back())) {
        throw std::invalid_argument("sweep_epsilon: eps_ref must be positive and below every listed eps");
    }

    auto run_one = [&](double eps) {
        RunConfig c = base;
        c.phys.eps = eps;
        SimulateOptions opt;
        opt.write_output = write_output;
        opt.output_dir = resolve_output_dir(base.output_dir) / ("eps_" + num(eps));
        if (log) *log << "sweep: eps=" << eps << '\n';
        RunResult r = simulate(c, opt);
        if (r.status != ExitCode::Ok) throw std::runtime_error("sweep_epsilon: eps=" + num(eps) + ": " + r.message);
        return extract_contour(r.final_state.phase);
    };

    SweepTable t;
    t.eps_ref = eps_ref;
    const Contour ref = run_one(eps_ref);
    for (double eps : eps_list) {
        const Contour c = run_one(eps);
        t.rows.push_back({eps, hausdorff(c, ref), ExitCode::Ok});
    }
    if (write_output) {
        std::ofstream o(resolve_output_dir(base.output_dir) / "sweep.csv");
        o << "eps,hausdorff_vs_ref\n";
        for (const SweepRow& r : t.rows) o << num(r.eps) << ',' << num(r.hausdorff) << '\n';
    }
    return t;
}

}  // namespace chimhd
