#include "chimhd/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace chimhd {

namespace {

struct Segment {
    std::size_t from_edge;
    std::size_t to_edge;
    Point2 from;
    Point2 to;
};

double seg_distance(Point2 a, Point2 b, Point2 q) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((q.x - a.x) * dx + (q.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(a.x + t * dx - q.x, a.y + t * dy - q.y);
}

const Polyline& single_closed(const Contour& c, const char* who) {
    if (c.lines.size() != 1 || !c.lines[0].closed || c.lines[0].points.size() < 3) {
        throw std::invalid_argument(std::string(who) + ": expected a single closed polyline");
    }
    return c.lines[0];
}

}  // namespace

Contour extract_contour(const CellField& phi, double level) {
    const GridSpec& g = phi.grid();
    const int nx = g.nx(), ny = g.ny();
    // Horizontal dual edges (i,j)-(i+1,j), then vertical (i,j)-(i,j+1).
    const std::size_t n_h = static_cast<std::size_t>(nx - 1) * ny;
    auto h_edge = [&](int i, int j) { return static_cast<std::size_t>(i + (nx - 1) * j); };
    auto v_edge = [&](int i, int j) { return n_h + static_cast<std::size_t>(i + nx * j); };

    std::vector<Segment> segs;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const std::array<int, 4> ci{i, i + 1, i + 1, i};
            const std::array<int, 4> cj{j, j, j + 1, j + 1};
            std::array<double, 4> v{};
            std::array<bool, 4> in{};
            int count = 0;
            for (int k = 0; k < 4; ++k) {
                v[k] = phi(ci[k], cj[k]);
                in[k] = v[k] > level;
                count += in[k];
            }
            if (count == 0 || count == 4) continue;
            const std::array<std::size_t, 4> eid{h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
            auto crossing = [&](int k) {
                const int k1 = (k + 1) % 4;
                const double t = (level - v[k]) / (v[k1] - v[k]);
                const double x0 = g.xc(ci[k]), y0 = g.yc(cj[k]);
                return Point2{x0 + t * (g.xc(ci[k1]) - x0), y0 + t * (g.yc(cj[k1]) - y0)};
            };
            // Leaving edges (inside -> outside in CCW order) start a segment
            // that keeps the inside region on its left.
            std::vector<int> leave, enter;
            for (int k = 0; k < 4; ++k) {
                const bool a = in[k], b = in[(k + 1) % 4];
                if (a && !b) leave.push_back(k);
                if (!a && b) enter.push_back(k);
            }
            if (leave.size() == 1) {
                segs.push_back({eid[leave[0]], eid[enter[0]], crossing(leave[0]), crossing(enter[0])});
            } else {
                const bool centre_in = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
                for (int k : leave) {
                    const int m = centre_in ? (k + 1) % 4 : (k + 3) % 4;
                    segs.push_back({eid[k], eid[m], crossing(k), crossing(m)});
                }
            }
        }
    }

    std::unordered_map<std::size_t, std::size_t> by_start;
    std::vector<bool> has_pred(segs.size(), false);
    for (std::size_t s = 0; s < segs.size(); ++s) by_start.emplace(segs[s].from_edge, s);
    std::vector<std::ptrdiff_t> next(segs.size(), -1);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        auto it = by_start.find(segs[s].to_edge);
        if (it != by_start.end()) {
            next[s] = static_cast<std::ptrdiff_t>(it->second);
            has_pred[it->second] = true;
        }
    }

    Contour out;
    std::vector<bool> used(segs.size(), false);
    auto walk = [&](std::size_t s0) {
        Polyline line;
        std::size_t s = s0;
        while (true) {
            used[s] = true;
            line.points.push_back(segs[s].from);
            const std::ptrdiff_t nx_s = next[s];
            if (nx_s < 0) {
                line.points.push_back(segs[s].to);
                break;
            }
            if (static_cast<std::size_t>(nx_s) == s0) {
                line.closed = true;
                break;
            }
            s = static_cast<std::size_t>(nx_s);
        }
        out.lines.push_back(std::move(line));
    };
    for (std::size_t s = 0; s < segs.size(); ++s)
        if (!used[s] && !has_pred[s]) walk(s);
    for (std::size_t s = 0; s < segs.size(); ++s)
        if (!used[s]) walk(s);
    return out;
}

double polygon_area(const Polyline& p) {
    double a = 0.0;
    const std::size_t n = p.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point2& u = p.points[k];
        const Point2& w = p.points[(k + 1) % n];
        a += u.x * w.y - w.x * u.y;
    }
    return 0.5 * a;
}

double polyline_length(const Polyline& p) {
    double len = 0.0;
    const std::size_t n = p.points.size();
    if (n < 2) return 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) len += std::hypot(p.points[k + 1].x - p.points[k].x, p.points[k + 1].y - p.points[k].y);
    if (p.closed) len += std::hypot(p.points[0].x - p.points[n - 1].x, p.points[0].y - p.points[n - 1].y);
    return len;
}

bool point_in_polygon(const Polyline& p, Point2 q) {
    bool inside = false;
    const std::size_t n = p.points.size();
    for (std::size_t k = 0, m = n - 1; k < n; m = k++) {
        const Point2& a = p.points[k];
        const Point2& b = p.points[m];
        if ((a.y > q.y) != (b.y > q.y) && q.x < (b.x - a.x) * (q.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
    }
    return inside;
}

double distance_to_polyline(const Polyline& p, Point2 q) {
    const std::size_t n = p.points.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    if (n == 1) return std::hypot(p.points[0].x - q.x, p.points[0].y - q.y);
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < n; ++k) d = std::min(d, seg_distance(p.points[k], p.points[k + 1], q));
    if (p.closed) d = std::min(d, seg_distance(p.points[n - 1], p.points[0], q));
    return d;
}

double distance_to_contour(const Contour& c, Point2 q) {
    double d = std::numeric_limits<double>::infinity();
    for (const Polyline& p : c.lines) d = std::min(d, distance_to_polyline(p, q));
    return d;
}

double hausdorff(const Contour& a, const Contour& b) {
    auto count = [](const Contour& c) {
        std::size_t n = 0;
        for (const Polyline& p : c.lines) n += p.points.size();
        return n;
    };
    if (count(a) == 0 || count(b) == 0) throw std::invalid_argument("hausdorff: empty contour");
    auto directed = [](const Contour& from, const Contour& to) {
        double h = 0.0;
        for (const Polyline& p : from.lines)
            for (const Point2& q : p.points) h = std::max(h, distance_to_contour(to, q));
        return h;
    };
    return std::max(directed(a, b), directed(b, a));
}

CircleFit circle_fit(const Contour& c) {
    std::vector<Point2> pts;
    for (const Polyline& p : c.lines) pts.insert(pts.end(), p.points.begin(), p.points.end());
    if (pts.size() < 3) throw std::invalid_argument("circle_fit: need at least 3 points");

    double mx = 0.0, my = 0.0;
    for (const Point2& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());

    // Kasa: minimise sum (x^2 + y^2 + D x + E y + F)^2 in centred coordinates.
    double sxx = 0, sxy = 0, syy = 0, sx = 0, sy = 0, sz = 0, sxz = 0, syz = 0, scale = 0;
    for (const Point2& p : pts) {
        const double x = p.x - mx, y = p.y - my, z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sx += x;
        sy += y;
        sz += z;
        sxz += x * z;
        syz += y * z;
        scale = std::max(scale, z);
    }
    const double n = static_cast<double>(pts.size());
    const std::array<std::array<double, 3>, 3> m{{{sxx, sxy, sx}, {sxy, syy, sy}, {sx, sy, n}}};
    const std::array<double, 3> r{-sxz, -syz, -sz};
    auto det3 = [](const std::array<std::array<double, 3>, 3>& a) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    if (!(std::abs(det) > 1e-12 * n * n * n * scale * scale)) throw std::invalid_argument("circle_fit: degenerate (collinear) input");
    std::array<double, 3> sol{};
    for (int k = 0; k < 3; ++k) {
        auto mk = m;
        for (int i = 0; i < 3; ++i) mk[i][k] = r[i];
        sol[k] = det3(mk) / det;
    }
    const double cx = -0.5 * sol[0], cy = -0.5 * sol[1];
    const double r2 = cx * cx + cy * cy - sol[2];
    if (!(r2 > 0.0)) throw std::invalid_argument("circle_fit: degenerate (collinear) input");

    CircleFit fit;
    fit.center = {cx + mx, cy + my};
    fit.radius = std::sqrt(r2);
    double acc = 0.0;
    for (const Point2& p : pts) {
        const double d = std::hypot(p.x - fit.center.x, p.y - fit.center.y) - fit.radius;
        acc += d * d;
    }
    fit.rms = std::sqrt(acc / n);
    return fit;
}

double isoperimetric_ratio(const Contour& c) {
    const Polyline& p = single_closed(c, "isoperimetric_ratio");
    const double per = polyline_length(p);
    if (!(per > 0.0)) throw std::invalid_argument("isoperimetric_ratio: zero perimeter");
    return 4.0 * std::numbers::pi * std::abs(polygon_area(p)) / (per * per);
}

}  // namespace chimhd
