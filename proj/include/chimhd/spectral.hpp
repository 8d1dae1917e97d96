/// @file spectral.hpp
/// @brief Exact separable solves for constant-coefficient second-difference
/// operators on the MAC grid, used as Krylov preconditioners.
///
/// Each 1D second difference with the boundary treatment of one field layout
/// has a known sine/cosine eigenbasis; tensor products of two such bases
/// diagonalise the 2D operator, so any function of -Laplacian can be applied
/// with one fast real-to-real transform each way (DCT-II/III, DST-I,
/// DST-II/III).
#pragma once

#include <functional>
#include <memory>
#include <span>

#include "chimhd/grid.hpp"
#include "chimhd/sparse.hpp"

namespace chimhd {

enum class Boundary1D {
    NeumannCell,    ///< cell centres, zero-flux walls: cos(pi k (i+1/2)/n), k = 0..n-1
    DirichletNode,  ///< interior nodes 1..n-1, zero at walls: sin(pi k i/n), k = 1..n-1
    DirichletCell,  ///< cell centres, odd ghost behind walls: sin(pi k (i+1/2)/n), k = 1..n
};

/// Orthonormal eigenbasis of the negative 1D second difference.
struct Basis1D {
    Boundary1D bc = Boundary1D::NeumannCell;
    int size = 0;
    Vector lambda;  ///< eigenvalues, >= 0
    Vector norm;    ///< 2-norm of the unnormalised sine/cosine of each mode
};

Basis1D make_basis(Boundary1D bc, int cells, double h);

/// Dense orthonormal modes of a basis (row k = mode k), for reference checks.
Vector dense_modes(const Basis1D& b);

/// Tensor-product transform on a size_x by size_y array (index i + size_x*j).
class SeparableTransform {
public:
    SeparableTransform(Basis1D bx, Basis1D by);
    ~SeparableTransform();
    SeparableTransform(const SeparableTransform&) = delete;
    SeparableTransform& operator=(const SeparableTransform&) = delete;

    int size_x() const { return bx_.size; }
    int size_y() const { return by_.size; }
    std::size_t size() const { return static_cast<std::size_t>(bx_.size) * static_cast<std::size_t>(by_.size); }
    /// Eigenvalue of the negative 2D Laplacian for mode (kx, ky) stored at kx + size_x*ky.
    double lambda(std::size_t k) const { return lambda_[k]; }

    void forward(std::span<const double> in, std::span<double> out) const;
    void inverse(std::span<const double> in, std::span<double> out) const;
    /// out = Q diag(m(lambda)) Q^T in
    void apply(std::span<const double> in, std::span<double> out,
               const std::function<double(double)>& multiplier) const;

private:
    struct Plans;
    Basis1D bx_;
    Basis1D by_;
    Vector lambda_;
    Vector scale_fwd_;  ///< per-mode factor after the raw forward transform
    Vector scale_inv_;  ///< per-mode factor before the raw inverse transform
    std::unique_ptr<Plans> plans_;
};

/// Solves (alpha I + beta (-L)) x = r for the Neumann cell Laplacian L.
/// With alpha = 0 the constant mode is dropped (r projected to zero mean,
/// x returned with zero mean).
class NeumannSolver {
public:
    explicit NeumannSolver(const GridSpec& grid);
    void solve(std::span<const double> r, std::span<double> x, double alpha, double beta) const;
    const SeparableTransform& transform() const { return t_; }

private:
    SeparableTransform t_;
};

/// Solves (alpha I + beta (-Delta)) u = r componentwise on the interior
/// faces of a no-slip MAC velocity; boundary faces are copied through.
class VelocitySolver {
public:
    explicit VelocitySolver(const GridSpec& grid);
    void solve(std::span<const double> r, std::span<double> u, double alpha, double beta) const;

private:
    GridSpec grid_;
    SeparableTransform tx_;
    SeparableTransform ty_;
    mutable Vector bufx_, bufy_;
};

}  // namespace chimhd
