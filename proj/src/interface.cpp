#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chimhd/asymptotics.hpp"
#include "chimhd/diagnostics.hpp"

namespace chimhd {

namespace {

const Polyline& single_loop(const Contour& c, const char* who) {
    if (c.lines.size() != 1 || !c.lines[0].closed || c.lines[0].points.size() < 3) {
        throw std::invalid_argument(std::string(who) + ": expected a single closed contour");
    }
    return c.lines[0];
}

double floor_of(const PotentialKind& k) {
    return k.type() == PotentialKind::Type::GinzburgLandau ? 0.0 : potential_F(k, well_location(k));
}

/// Bilinear interpolation on a lattice x0 + i dx (i < nx), y0 + j dy (j < ny).
template <class Get>
double bilinear(Get&& get, int nx, int ny, double x0, double y0, double dx, double dy, double x, double y) {
    const double sx = std::clamp((x - x0) / dx, 0.0, static_cast<double>(nx - 1));
    const double sy = std::clamp((y - y0) / dy, 0.0, static_cast<double>(ny - 1));
    const int i = std::min(static_cast<int>(sx), nx - 2);
    const int j = std::min(static_cast<int>(sy), ny - 2);
    const double tx = sx - i, ty = sy - j;
    return (1 - tx) * (1 - ty) * get(i, j) + tx * (1 - ty) * get(i + 1, j) + (1 - tx) * ty * get(i, j + 1) +
           tx * ty * get(i + 1, j + 1);
}

Point2 nearest_point(const Contour& c, Point2 q) {
    Point2 best{};
    double dbest = std::numeric_limits<double>::infinity();
    for (const Polyline& p : c.lines) {
        const std::size_t n = p.points.size();
        const std::size_t segs = p.closed ? n : n - 1;
        for (std::size_t k = 0; k < segs; ++k) {
            const Point2 a = p.points[k], b = p.points[(k + 1) % n];
            const double dx = b.x - a.x, dy = b.y - a.y, len2 = dx * dx + dy * dy;
            const double t = len2 > 0 ? std::clamp(((q.x - a.x) * dx + (q.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
            const Point2 r{a.x + t * dx, a.y + t * dy};
            const double d = std::hypot(r.x - q.x, r.y - q.y);
            if (d < dbest) {
                dbest = d;
                best = r;
            }
        }
    }
    return best;
}

}  // namespace

double sample_cell(const CellField& f, double x, double y) {
    const GridSpec& g = f.grid();
    return bilinear([&](int i, int j) { return f(i, j); }, g.nx(), g.ny(), g.xc(0), g.yc(0), g.hx(), g.hy(), x, y);
}

double sample_face_x(const FaceField& u, double x, double y) {
    const GridSpec& g = u.grid();
    return bilinear([&](int i, int j) { return u.x(i, j); }, g.nx() + 1, g.ny(), 0.0, g.yc(0), g.hx(), g.hy(), x, y);
}

double sample_face_y(const FaceField& u, double x, double y) {
    const GridSpec& g = u.grid();
    return bilinear([&](int i, int j) { return u.y(i, j); }, g.nx(), g.ny() + 1, g.xc(0), 0.0, g.hx(), g.hy(), x, y);
}

double pressure_jump(const State& state, const Contour& c, double band) {
    const Polyline& loop = single_loop(c, "pressure_jump");
    const GridSpec& g = state.grid();
    double sin = 0.0, sout = 0.0;
    int nin = 0, nout = 0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const Point2 q{g.xc(i), g.yc(j)};
            if (distance_to_polyline(loop, q) <= band) continue;
            const double p = state.pressure(i, j) + state.phase(i, j) * state.chem(i, j);
            if (point_in_polygon(loop, q)) {
                sin += p;
                ++nin;
            } else {
                sout += p;
                ++nout;
            }
        }
    }
    if (nin == 0 || nout == 0) throw std::invalid_argument("pressure_jump: empty inside or outside band");
    return sin / nin - sout / nout;
}

double gibbs_thomson_residual(const State& state, const Contour& c, const PhysParams& params) {
    if (params.mobility.kind != MobilityCase::I) throw std::invalid_argument("gibbs_thomson_residual: requires Case I mobility");
    const Polyline& loop = single_loop(c, "gibbs_thomson_residual");
    const CircleFit fit = circle_fit(c);
    const GridSpec& g = state.grid();

    double inside_phase = 0.0, band_mu = 0.0;
    int n_band = 0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double p = state.phase(i, j);
            if (point_in_polygon(loop, {g.xc(i), g.yc(j)})) inside_phase += p;
            if (std::abs(p) < 0.9) {
                band_mu += state.chem(i, j);
                ++n_band;
            }
        }
    }
    if (n_band == 0) throw std::invalid_argument("gibbs_thomson_residual: empty interfacial band");
    const double s = inside_phase >= 0.0 ? 1.0 : -1.0;
    const double expected = s * params.lambda_hat() / (2.0 * fit.radius);
    return std::abs(band_mu / n_band - expected) / std::abs(expected);
}

double equipartition_residual(const CellField& phi, const PhysParams& params) {
    const GridSpec& g = phi.grid();
    const FaceField gp = grad_cell_to_face(phi);
    const double fmin = floor_of(params.potential);
    const double barrier = potential_F(params.potential, 0.0) - fmin;
    double worst = -1.0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double p = phi(i, j);
            if (!(std::abs(p) < 0.9)) continue;
            const double gx = 0.5 * (gp.x(i, j) + gp.x(i + 1, j));
            const double gy = 0.5 * (gp.y(i, j) + gp.y(i, j + 1));
            const double lhs = 0.5 * params.eps * params.eps * (gx * gx + gy * gy);
            worst = std::max(worst, std::abs(lhs - (potential_F(params.potential, p) - fmin)));
        }
    }
    if (worst < 0.0) throw std::invalid_argument("equipartition_residual: empty interfacial band");
    return worst / barrier;
}

StefanSample stefan_flux(const State& state, const Contour& c, const Contour& contour_prev, double dt,
                         const PhysParams& params) {
    if (params.mobility.kind == MobilityCase::III) throw std::invalid_argument("stefan_flux: Case III mobility not supported");
    if (!(dt > 0.0)) throw std::invalid_argument("stefan_flux: dt must be > 0");
    if (c.empty() || contour_prev.empty()) throw std::invalid_argument("stefan_flux: empty contour");
    const GridSpec& g = state.grid();
    const double h = std::max(g.hx(), g.hy());
    const double d1 = 2.5 * params.eps, d2 = d1 + 2.0 * h;
    const double m = params.mobility_at(0.0);

    StefanSample out;
    double sl = 0.0, sr = 0.0, sd = 0.0;
    for (const Polyline& line : c.lines) {
        const std::size_t n = line.points.size();
        if (n < 3) continue;
        for (std::size_t k = 0; k < n; ++k) {
            if (!line.closed && (k == 0 || k + 1 == n)) continue;
            const Point2 p = line.points[k];
            const Point2 a = line.points[(k + n - 1) % n], b = line.points[(k + 1) % n];
            const double tl = std::hypot(b.x - a.x, b.y - a.y);
            if (!(tl > 0.0)) continue;
            const double nx = -(b.y - a.y) / tl, ny = (b.x - a.x) / tl;

            const Point2 q = nearest_point(contour_prev, p);
            const double v = ((p.x - q.x) * nx + (p.y - q.y) * ny) / dt;
            const double un = sample_face_x(state.vel, p.x, p.y) * nx + sample_face_y(state.vel, p.x, p.y) * ny;

            auto mu_at = [&](double s) { return sample_cell(state.chem, p.x + s * nx, p.y + s * ny); };
            const double dplus = (mu_at(d2) - mu_at(d1)) / (d2 - d1);
            const double dminus = (mu_at(-d1) - mu_at(-d2)) / (d2 - d1);

            const double lhs = 2.0 * (-v + un);
            const double rhs = m * (dplus - dminus);
            sl += lhs * lhs;
            sr += rhs * rhs;
            sd += (lhs - rhs) * (lhs - rhs);
            ++out.samples;
        }
    }
    if (out.samples == 0) throw std::invalid_argument("stefan_flux: no usable contour vertices");
    out.lhs_rms = std::sqrt(sl / out.samples);
    out.rhs_rms = std::sqrt(sr / out.samples);
    out.mismatch_rms = std::sqrt(sd / out.samples);
    return out;
}

double stefan_flux_residual(const State& state, const Contour& c, const Contour& contour_prev, double dt,
                            const PhysParams& params) {
    const StefanSample s = stefan_flux(state, c, contour_prev, dt, params);
    const double scale = std::max(s.lhs_rms, s.rhs_rms);
    return scale > 0.0 ? s.mismatch_rms / scale : 0.0;
}

}  // namespace chimhd
