#include "chimhd/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chimhd {

GridSpec::GridSpec(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("GridSpec: nx and ny must be >= 4");
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("GridSpec: domain extents must be positive");
}

CellField::CellField(const GridSpec& grid, double value) : grid_(grid), v_(grid.num_cells(), value) {}

CellField::CellField(const GridSpec& grid, Vector values) : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.num_cells()) throw std::invalid_argument("CellField: size does not match grid");
}

FaceField::FaceField(const GridSpec& grid, double value) : grid_(grid), v_(grid.num_faces(), value) {}

FaceField::FaceField(const GridSpec& grid, Vector values) : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.num_faces()) throw std::invalid_argument("FaceField: size does not match grid");
}

void FaceField::zero_boundary() {
    const int nx = grid_.nx(), ny = grid_.ny();
    for (int j = 0; j < ny; ++j) {
        x(0, j) = 0.0;
        x(nx, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        y(i, 0) = 0.0;
        y(i, ny) = 0.0;
    }
}

bool FaceField::is_admissible() const {
    const int nx = grid_.nx(), ny = grid_.ny();
    for (int j = 0; j < ny; ++j) {
        if (x(0, j) != 0.0 || x(nx, j) != 0.0) return false;
    }
    for (int i = 0; i < nx; ++i) {
        if (y(i, 0) != 0.0 || y(i, ny) != 0.0) return false;
    }
    return true;
}

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* who) {
    if (!(a == b)) throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

}  // namespace

double inner(const CellField& a, const CellField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    return dot(a.values(), b.values()) * a.grid().cell_area();
}

double inner(const FaceField& a, const FaceField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    return dot(a.values(), b.values()) * a.grid().cell_area();
}

double integral(const CellField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().cell_area();
}

double mean(const CellField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

void remove_mean(CellField& f) {
    const double m = mean(f);
    for (double& v : f.values()) v -= m;
}

double max_abs(const CellField& f) { return max_abs(std::span<const double>(f.values())); }
double max_abs(const FaceField& f) { return max_abs(std::span<const double>(f.values())); }

FaceField grad_cell_to_face(const CellField& f) {
    const GridSpec& g = f.grid();
    FaceField out(g);
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) out.x(i, j) = (f(i, j) - f(i - 1, j)) / hx;
    }
    for (int j = 1; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) out.y(i, j) = (f(i, j) - f(i, j - 1)) / hy;
    }
    return out;
}

CellField div_face_to_cell(const FaceField& v) {
    const GridSpec& g = v.grid();
    CellField out(g);
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            out(i, j) = (v.x(i + 1, j) - v.x(i, j)) / hx + (v.y(i, j + 1) - v.y(i, j)) / hy;
        }
    }
    return out;
}

CellField laplacian_neumann(const CellField& f) { return div_face_to_cell(grad_cell_to_face(f)); }

FaceField interp_cell_to_face(const CellField& f, InterpMode mode) {
    const GridSpec& g = f.grid();
    if (mode == InterpMode::Harmonic) {
        for (double v : f.values()) {
            if (!(v > 0.0)) throw std::invalid_argument("interp_cell_to_face: harmonic mode needs positive values");
        }
    }
    auto avg = [mode](double a, double b) {
        return mode == InterpMode::Arithmetic ? 0.5 * (a + b) : 2.0 * a * b / (a + b);
    };
    const int nx = g.nx(), ny = g.ny();
    FaceField out(g);
    for (int j = 0; j < ny; ++j) {
        out.x(0, j) = f(0, j);
        out.x(nx, j) = f(nx - 1, j);
        for (int i = 1; i < nx; ++i) out.x(i, j) = avg(f(i - 1, j), f(i, j));
    }
    for (int i = 0; i < nx; ++i) {
        out.y(i, 0) = f(i, 0);
        out.y(i, ny) = f(i, ny - 1);
        for (int j = 1; j < ny; ++j) out.y(i, j) = avg(f(i, j - 1), f(i, j));
    }
    return out;
}

Vector node_average(const CellField& f) {
    const GridSpec& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    Vector out(g.num_nodes(), 0.0);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double s = 0.0;
            int n = 0;
            for (int dj = -1; dj <= 0; ++dj) {
                for (int di = -1; di <= 0; ++di) {
                    int ci = i + di, cj = j + dj;
                    if (ci < 0 || cj < 0 || ci >= nx || cj >= ny) continue;
                    s += f(ci, cj);
                    ++n;
                }
            }
            out[g.node(i, j)] = s / n;
        }
    }
    return out;
}

namespace {

/// One sampled strain component: sum_k c_k u[idx_k], at most 2 terms per
/// derivative, so at most 4 for the shear sample.
struct StrainSample {
    std::array<std::size_t, 4> idx{};
    std::array<double, 4> coef{};
    int n = 0;
    void add(std::size_t i, double c) {
        idx[static_cast<std::size_t>(n)] = i;
        coef[static_cast<std::size_t>(n)] = c;
        ++n;
    }
};

/// Adds -w/A * c c^T for every strain sample: the matrix of the bilinear
/// form -sum w s(u) s(v) expressed in the face inner product.
template <class Visitor>
void for_each_strain(const CellField& eta_cell, Visitor&& visit) {
    const GridSpec& g = eta_cell.grid();
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy(), area = g.cell_area();
    for (double v : eta_cell.values()) {
        if (!(v > 0.0)) throw std::invalid_argument("viscous operator: viscosity must be positive");
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double w = 2.0 * eta_cell(i, j) * area;
            StrainSample sxx;
            if (i + 1 < nx) sxx.add(g.xface(i + 1, j), 1.0 / hx);
            if (i > 0) sxx.add(g.xface(i, j), -1.0 / hx);
            visit(sxx, w);
            StrainSample syy;
            if (j + 1 < ny) syy.add(g.yface(i, j + 1), 1.0 / hy);
            if (j > 0) syy.add(g.yface(i, j), -1.0 / hy);
            visit(syy, w);
        }
    }
    const Vector eta_node = node_average(eta_cell);
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            StrainSample sxy;
            if (i >= 1 && i <= nx - 1) {
                // du/dy with the no-slip ghost value -u behind the wall.
                if (j == 0) {
                    sxy.add(g.xface(i, 0), 2.0 / hy);
                } else if (j == ny) {
                    sxy.add(g.xface(i, ny - 1), -2.0 / hy);
                } else {
                    sxy.add(g.xface(i, j), 1.0 / hy);
                    sxy.add(g.xface(i, j - 1), -1.0 / hy);
                }
            }
            if (j >= 1 && j <= ny - 1) {
                if (i == 0) {
                    sxy.add(g.yface(0, j), 2.0 / hx);
                } else if (i == nx) {
                    sxy.add(g.yface(nx - 1, j), -2.0 / hx);
                } else {
                    sxy.add(g.yface(i, j), 1.0 / hx);
                    sxy.add(g.yface(i - 1, j), -1.0 / hx);
                }
            }
            if (sxy.n == 0) continue;
            double weight = area;
            if (i == 0 || i == nx) weight *= 0.5;
            if (j == 0 || j == ny) weight *= 0.5;
            visit(sxy, eta_node[g.node(i, j)] * weight);
        }
    }
}

}  // namespace

SparseMatrix viscous_matrix(const CellField& eta_cell) {
    const GridSpec& g = eta_cell.grid();
    const double area = g.cell_area();
    SparseBuilder b(g.num_faces(), g.num_faces());
    for_each_strain(eta_cell, [&](const StrainSample& s, double w) {
        for (int a = 0; a < s.n; ++a) {
            for (int c = 0; c < s.n; ++c) {
                const auto ua = static_cast<std::size_t>(a), uc = static_cast<std::size_t>(c);
                b.add(s.idx[ua], s.idx[uc], -w * s.coef[ua] * s.coef[uc] / area);
            }
        }
    });
    return b.build();
}

FaceField viscous_apply(const CellField& eta_cell, const FaceField& u) {
    require_same_grid(eta_cell.grid(), u.grid(), "viscous_apply");
    SparseMatrix m = viscous_matrix(eta_cell);
    return FaceField(u.grid(), m * u.values());
}

SparseMatrix convection_matrix(const FaceField& a) {
    const GridSpec& g = a.grid();
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), hy = g.hy();
    const double two_vol = 2.0 * g.cell_area();
    SparseBuilder b(g.num_faces(), g.num_faces());
    auto couple = [&](std::size_t from, std::size_t to, double flux) {
        if (flux == 0.0) return;
        b.add(from, to, flux / two_vol);
        b.add(to, from, -flux / two_vol);
    };
    // x-momentum control volumes centred on interior x-faces.
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            if (i + 1 < nx) {
                const double flux = 0.5 * (a.x(i, j) + a.x(i + 1, j)) * hy;
                couple(g.xface(i, j), g.xface(i + 1, j), flux);
            }
            if (j + 1 < ny) {
                const double flux = 0.5 * (a.y(i - 1, j + 1) + a.y(i, j + 1)) * hx;
                couple(g.xface(i, j), g.xface(i, j + 1), flux);
            }
        }
    }
    // y-momentum control volumes centred on interior y-faces.
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (i + 1 < nx) {
                const double flux = 0.5 * (a.x(i + 1, j - 1) + a.x(i + 1, j)) * hy;
                couple(g.yface(i, j), g.yface(i + 1, j), flux);
            }
            if (j + 1 < ny) {
                const double flux = 0.5 * (a.y(i, j) + a.y(i, j + 1)) * hx;
                couple(g.yface(i, j), g.yface(i, j + 1), flux);
            }
        }
    }
    return b.build();
}

FaceField convect(const FaceField& u_adv, const FaceField& w) {
    require_same_grid(u_adv.grid(), w.grid(), "convect");
    SparseMatrix m = convection_matrix(u_adv);
    return FaceField(w.grid(), m * w.values());
}

FaceField cross_b(const FaceField& v, double b) {
    const GridSpec& g = v.grid();
    const int nx = g.nx(), ny = g.ny();
    FaceField out(g);
    // Boundary sources are skipped so that the two averages stay transposes.
    auto vy = [&](int i, int j) { return (j == 0 || j == ny) ? 0.0 : v.y(i, j); };
    auto vx = [&](int i, int j) { return (i == 0 || i == nx) ? 0.0 : v.x(i, j); };
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            out.x(i, j) = 0.25 * b * (vy(i - 1, j) + vy(i, j) + vy(i - 1, j + 1) + vy(i, j + 1));
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            out.y(i, j) = -0.25 * b * (vx(i, j - 1) + vx(i + 1, j - 1) + vx(i, j) + vx(i + 1, j));
        }
    }
    return out;
}

SparseMatrix grad_matrix(const GridSpec& g) {
    SparseBuilder b(g.num_faces(), g.num_cells());
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) {
            b.add(g.xface(i, j), g.cell(i, j), 1.0 / hx);
            b.add(g.xface(i, j), g.cell(i - 1, j), -1.0 / hx);
        }
    }
    for (int j = 1; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            b.add(g.yface(i, j), g.cell(i, j), 1.0 / hy);
            b.add(g.yface(i, j), g.cell(i, j - 1), -1.0 / hy);
        }
    }
    return b.build();
}

SparseMatrix div_matrix(const GridSpec& g) {
    SparseBuilder b(g.num_cells(), g.num_faces());
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t c = g.cell(i, j);
            b.add(c, g.xface(i + 1, j), 1.0 / hx);
            b.add(c, g.xface(i, j), -1.0 / hx);
            b.add(c, g.yface(i, j + 1), 1.0 / hy);
            b.add(c, g.yface(i, j), -1.0 / hy);
        }
    }
    return b.build();
}

SparseMatrix laplacian_matrix(const GridSpec& g) {
    SparseBuilder b(g.num_cells(), g.num_cells());
    const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const std::size_t c = g.cell(i, j);
            auto link = [&](int ni, int nj, double w) {
                b.add(c, g.cell(ni, nj), w);
                b.add(c, c, -w);
            };
            if (i > 0) link(i - 1, j, ax);
            if (i + 1 < g.nx()) link(i + 1, j, ax);
            if (j > 0) link(i, j - 1, ay);
            if (j + 1 < g.ny()) link(i, j + 1, ay);
        }
    }
    return b.build();
}

SparseMatrix diffusion_matrix(const FaceField& coeff) {
    const GridSpec& g = coeff.grid();
    SparseBuilder b(g.num_cells(), g.num_cells());
    const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
    auto link = [&](std::size_t c, std::size_t n, double w) {
        b.add(c, c, w);
        b.add(c, n, -w);
        b.add(n, n, w);
        b.add(n, c, -w);
    };
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) link(g.cell(i - 1, j), g.cell(i, j), coeff.x(i, j) * ax);
    }
    for (int j = 1; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) link(g.cell(i, j - 1), g.cell(i, j), coeff.y(i, j) * ay);
    }
    return b.build();
}

}  // namespace chimhd
