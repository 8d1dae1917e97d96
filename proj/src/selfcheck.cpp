#include "chimhd/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "chimhd/asymptotics.hpp"
#include "chimhd/driver.hpp"

namespace chimhd {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

CellField random_cells(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CellField f(g);
    for (double& v : f.values()) v = u(rng);
    return f;
}

FaceField random_faces(const GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FaceField f(g);
    for (double& v : f.values()) v = u(rng);
    f.zero_boundary();
    return f;
}

}  // namespace

std::vector<CheckResult> run_selfcheck(unsigned seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    const GridSpec g(24, 20, 1.0, 0.8);

    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const CellField f = random_cells(g, rng);
            const FaceField v = random_faces(g, rng);
            const double a = inner(grad_cell_to_face(f), v), b = inner(f, div_face_to_cell(v));
            worst = std::max(worst, std::abs(a + b) / std::max(std::abs(a), 1e-300));
        }
        out.push_back({"summation by parts", worst <= 1e-12, "max rel " + sci(worst)});
    }
    {
        double sym = 0.0, skew = 0.0, lor = 0.0;
        bool nsd = true;
        std::uniform_real_distribution<double> pos(0.5, 3.0);
        for (int t = 0; t < 20; ++t) {
            CellField eta(g);
            for (double& e : eta.values()) e = pos(rng);
            const FaceField u = random_faces(g, rng), w = random_faces(g, rng);
            const double a = inner(viscous_apply(eta, u), w), b = inner(u, viscous_apply(eta, w));
            sym = std::max(sym, std::abs(a - b) / std::abs(a));
            nsd = nsd && inner(viscous_apply(eta, u), u) < 0.0;
            skew = std::max(skew, std::abs(inner(convect(u, w), w)) / inner(w, w));
            const double l1 = inner(cross_b(w, 1.3), u), l2 = inner(cross_b(u, 1.3), w);
            lor = std::max(lor, std::abs(l1 + l2) / std::max(std::abs(l1), 1e-300));
        }
        out.push_back({"viscous symmetry / definiteness", sym <= 1e-12 && nsd, "max rel " + sci(sym)});
        out.push_back({"convection skew-symmetry", skew <= 1e-12, "max rel " + sci(skew)});
        out.push_back({"Lorentz / Ohm cancellation", lor <= 1e-12, "max rel " + sci(lor)});
    }
    {
        const IotaResult r = iota_quadrature(PotentialKind::ginzburg_landau());
        const double exact = 2.0 * std::sqrt(2.0) / 3.0;
        const bool ok = std::abs(r.value - exact) < 1e-9 && std::abs(r.xi_integral - r.phi_integral) < 1e-8;
        out.push_back({"surface tension constant", ok, "iota = " + sci(r.value)});
    }
    for (Scenario s : {Scenario::RoundedSquare, Scenario::TwoBubbles, Scenario::VortexOnly}) {
        RunConfig c = default_config(s);
        c.nx = c.ny = 32;
        c.t_end = 5 * c.dt;
        const RunResult r = simulate(c);
        const bool ok = r.status == ExitCode::Ok && r.max_energy_increase <= 1e-8 * r.initial_energy.total;
        out.push_back({"5 steps of " + to_string(s), ok,
                       r.status == ExitCode::Ok ? "max dE " + sci(r.max_energy_increase) + ", max|div J| " +
                                                      sci(r.max_charge) + ", mass drift " + sci(r.max_mass_drift)
                                                : r.message});
    }
    return out;
}

}  // namespace chimhd
