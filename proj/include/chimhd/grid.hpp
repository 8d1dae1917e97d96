/// @file grid.hpp
/// @brief Uniform staggered (MAC) grid on (0,lx)x(0,ly), field containers and
/// the discrete operators the time stepper is built from.
///
/// Layout: scalars live at cell centres (i + 1/2, j + 1/2); the x-component
/// of a vector lives on vertical faces (i, j + 1/2), i = 0..nx, and the
/// y-component on horizontal faces (i + 1/2, j), j = 0..ny. Faces with
/// i = 0, nx (resp. j = 0, ny) are boundary faces and carry zero for every
/// field with a no-flux or no-slip condition ("admissible" fields).
///
/// Inner products weight every cell and every face by hx*hy, so that
///     <grad f, v>_face = -<f, div v>_cell
/// holds exactly for admissible v; the energy and charge identities of the
/// scheme are consequences of this.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chimhd/sparse.hpp"

namespace chimhd {

class GridSpec {
public:
    /// Throws std::invalid_argument unless nx, ny >= 4 and lx, ly > 0.
    GridSpec(int nx, int ny, double lx = 1.0, double ly = 1.0);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double hx() const { return lx_ / nx_; }
    double hy() const { return ly_ / ny_; }
    double cell_area() const { return hx() * hy(); }

    std::size_t num_cells() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
    std::size_t num_xfaces() const { return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(ny_); }
    std::size_t num_yfaces() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_ + 1); }
    std::size_t num_faces() const { return num_xfaces() + num_yfaces(); }
    std::size_t num_nodes() const { return static_cast<std::size_t>(nx_ + 1) * static_cast<std::size_t>(ny_ + 1); }

    std::size_t cell(int i, int j) const { return static_cast<std::size_t>(i + nx_ * j); }
    std::size_t xface(int i, int j) const { return static_cast<std::size_t>(i + (nx_ + 1) * j); }
    std::size_t yface(int i, int j) const { return num_xfaces() + static_cast<std::size_t>(i + nx_ * j); }
    std::size_t node(int i, int j) const { return static_cast<std::size_t>(i + (nx_ + 1) * j); }

    double xc(int i) const { return (i + 0.5) * hx(); }
    double yc(int j) const { return (j + 0.5) * hy(); }
    double xn(int i) const { return i * hx(); }
    double yn(int j) const { return j * hy(); }

    bool is_boundary_xface(int i) const { return i == 0 || i == nx_; }
    bool is_boundary_yface(int j) const { return j == 0 || j == ny_; }

    bool operator==(const GridSpec&) const = default;

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
};

/// Cell-centred scalar.
class CellField {
public:
    explicit CellField(const GridSpec& grid, double value = 0.0);
    CellField(const GridSpec& grid, Vector values);

    const GridSpec& grid() const { return grid_; }
    double& operator()(int i, int j) { return v_[grid_.cell(i, j)]; }
    double operator()(int i, int j) const { return v_[grid_.cell(i, j)]; }
    Vector& values() { return v_; }
    const Vector& values() const { return v_; }
    std::size_t size() const { return v_.size(); }

private:
    GridSpec grid_;
    Vector v_;
};

/// Face-normal vector components; x-faces first, then y-faces, in one array
/// indexed by GridSpec::xface / GridSpec::yface.
class FaceField {
public:
    explicit FaceField(const GridSpec& grid, double value = 0.0);
    FaceField(const GridSpec& grid, Vector values);

    const GridSpec& grid() const { return grid_; }
    double& x(int i, int j) { return v_[grid_.xface(i, j)]; }
    double x(int i, int j) const { return v_[grid_.xface(i, j)]; }
    double& y(int i, int j) { return v_[grid_.yface(i, j)]; }
    double y(int i, int j) const { return v_[grid_.yface(i, j)]; }
    Vector& values() { return v_; }
    const Vector& values() const { return v_; }
    std::size_t size() const { return v_.size(); }

    /// Zeroes every boundary-normal entry.
    void zero_boundary();
    bool is_admissible() const;

private:
    GridSpec grid_;
    Vector v_;
};

enum class InterpMode { Arithmetic, Harmonic };

// --- weighted inner products and reductions -------------------------------
double inner(const CellField& a, const CellField& b);
double inner(const FaceField& a, const FaceField& b);
/// Sum of values times cell area, i.e. the integral over the domain.
double integral(const CellField& f);
double mean(const CellField& f);
void remove_mean(CellField& f);
double max_abs(const CellField& f);
double max_abs(const FaceField& f);

// --- stencil operators ----------------------------------------------------
FaceField grad_cell_to_face(const CellField& f);
CellField div_face_to_cell(const FaceField& v);
CellField laplacian_neumann(const CellField& f);
/// Two-point face average; boundary faces copy the adjacent cell.
/// Harmonic mode throws std::invalid_argument on nonpositive input.
FaceField interp_cell_to_face(const CellField& f, InterpMode mode = InterpMode::Arithmetic);
/// Arithmetic mean of the (up to four) cells touching each grid node.
Vector node_average(const CellField& f);
/// 2 div(eta D(u)) with no-slip walls. Throws on nonpositive eta.
FaceField viscous_apply(const CellField& eta_cell, const FaceField& u);
/// Skew-symmetric convection C(u_adv) w; <C(u_adv) w, w> = 0 exactly.
FaceField convect(const FaceField& u_adv, const FaceField& w);
/// Discrete v x (0,0,b) for a face vector: (b * avg(v_y), -b * avg(v_x)),
/// with 4-point averages that are mutual transposes, so
/// <cross_b(J), u> + <cross_b(u), J> = 0 for admissible fields.
FaceField cross_b(const FaceField& v, double b);

// --- assembled operators (face/cell DOF numbering of GridSpec) -------------
SparseMatrix grad_matrix(const GridSpec& g);
SparseMatrix div_matrix(const GridSpec& g);
SparseMatrix laplacian_matrix(const GridSpec& g);
/// Matrix of -div(coeff grad .) with homogeneous Neumann walls; symmetric
/// positive semi-definite for positive coeff, constants in the kernel.
SparseMatrix diffusion_matrix(const FaceField& coeff);
/// Symmetric matrix of 2 div(eta D(.)); boundary rows and columns are empty.
SparseMatrix viscous_matrix(const CellField& eta_cell);
/// Skew matrix of C(u_adv); boundary rows and columns are empty.
SparseMatrix convection_matrix(const FaceField& u_adv);

}  // namespace chimhd
