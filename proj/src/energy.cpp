#include <cmath>

#include "chimhd/asymptotics.hpp"
#include "chimhd/diagnostics.hpp"

namespace chimhd {

namespace {

double potential_floor(const PotentialKind& kind) {
    if (kind.type() == PotentialKind::Type::GinzburgLandau) return 0.0;
    return potential_F(kind, well_location(kind));
}

}  // namespace

EnergyBreakdown total_energy(const State& state, const PhysParams& params) {
    EnergyBreakdown e;
    e.kinetic = 0.5 * inner(state.vel, state.vel);
    const FaceField gp = grad_cell_to_face(state.phase);
    e.interfacial_gradient = 0.5 * params.gamma * params.eps * inner(gp, gp);
    const double fmin = potential_floor(params.potential);
    double bulk = 0.0;
    for (double p : state.phase.values()) bulk += potential_F(params.potential, p) - fmin;
    e.interfacial_bulk = params.gamma / params.eps * bulk * state.grid().cell_area();
    e.total = e.kinetic + e.interfacial_gradient + e.interfacial_bulk;
    return e;
}

DissipationBreakdown dissipation_breakdown(const State& state, const PhysParams& params) {
    const GridSpec& g = state.grid();
    DissipationBreakdown d;

    CellField eta(g), mob(g), res(g);
    for (std::size_t k = 0; k < g.num_cells(); ++k) {
        const double p = state.phase.values()[k];
        eta.values()[k] = params.viscosity(p);
        mob.values()[k] = params.mobility_at(p);
        res.values()[k] = params.resistivity(p);
    }
    d.viscous = -inner(viscous_apply(eta, state.vel), state.vel);

    const FaceField gm = grad_cell_to_face(state.chem);
    const FaceField mf = interp_cell_to_face(mob);
    const FaceField rf = interp_cell_to_face(res);
    double diff = 0.0, ohm = 0.0;
    for (std::size_t k = 0; k < gm.size(); ++k) {
        diff += mf.values()[k] * gm.values()[k] * gm.values()[k];
        ohm += rf.values()[k] * state.current.values()[k] * state.current.values()[k];
    }
    d.diffusive = diff * g.cell_area();
    d.ohmic = ohm * g.cell_area();
    d.total = d.viscous + d.diffusive + d.ohmic;
    return d;
}

double dissipation_rate(const State& state, const PhysParams& params) {
    return dissipation_breakdown(state, params).total;
}

}  // namespace chimhd
