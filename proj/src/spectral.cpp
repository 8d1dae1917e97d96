#include "chimhd/spectral.hpp"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <stdexcept>

#include <fftw3.h>

namespace chimhd {

namespace {

double mode_value(Boundary1D bc, int k, int i, int cells) {
    const double pi = std::numbers::pi;
    switch (bc) {
        case Boundary1D::NeumannCell: return std::cos(pi * k * (i + 0.5) / cells);
        case Boundary1D::DirichletNode: return std::sin(pi * k * (i + 1) / cells);
        case Boundary1D::DirichletCell: return std::sin(pi * k * (i + 0.5) / cells);
    }
    return 0.0;
}

int wavenumber(Boundary1D bc, int m) { return bc == Boundary1D::NeumannCell ? m : m + 1; }

fftw_r2r_kind forward_kind(Boundary1D bc) {
    switch (bc) {
        case Boundary1D::NeumannCell: return FFTW_REDFT10;
        case Boundary1D::DirichletNode: return FFTW_RODFT00;
        case Boundary1D::DirichletCell: return FFTW_RODFT10;
    }
    return FFTW_REDFT10;
}

fftw_r2r_kind inverse_kind(Boundary1D bc) {
    switch (bc) {
        case Boundary1D::NeumannCell: return FFTW_REDFT01;
        case Boundary1D::DirichletNode: return FFTW_RODFT00;
        case Boundary1D::DirichletCell: return FFTW_RODFT01;
    }
    return FFTW_REDFT01;
}

/// The raw inverse transforms weight one end mode by 1 instead of 2.
double inverse_weight(const Basis1D& b, int m) {
    if (b.bc == Boundary1D::NeumannCell && m == 0) return 1.0;
    if (b.bc == Boundary1D::DirichletCell && m == b.size - 1) return 1.0;
    return 0.5;
}

}  // namespace

Basis1D make_basis(Boundary1D bc, int cells, double h) {
    if (cells < 2 || !(h > 0.0)) throw std::invalid_argument("make_basis: bad size");
    const double pi = std::numbers::pi;
    Basis1D b;
    b.bc = bc;
    b.size = (bc == Boundary1D::DirichletNode) ? cells - 1 : cells;
    b.lambda.assign(static_cast<std::size_t>(b.size), 0.0);
    b.norm.assign(static_cast<std::size_t>(b.size), 0.0);
    for (int m = 0; m < b.size; ++m) {
        const int k = wavenumber(bc, m);
        double n2 = 0.0;
        for (int i = 0; i < b.size; ++i) n2 += mode_value(bc, k, i, cells) * mode_value(bc, k, i, cells);
        b.norm[static_cast<std::size_t>(m)] = std::sqrt(n2);
        b.lambda[static_cast<std::size_t>(m)] = (2.0 - 2.0 * std::cos(pi * k / cells)) / (h * h);
    }
    return b;
}

Vector dense_modes(const Basis1D& b) {
    const int n = b.size;
    const int cells = b.bc == Boundary1D::DirichletNode ? n + 1 : n;
    Vector q(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        for (int i = 0; i < n; ++i) {
            q[static_cast<std::size_t>(m * n + i)] =
                mode_value(b.bc, wavenumber(b.bc, m), i, cells) / b.norm[static_cast<std::size_t>(m)];
        }
    }
    return q;
}

struct SeparableTransform::Plans {
    double* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    ~Plans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (buf) fftw_free(buf);
    }
};

SeparableTransform::SeparableTransform(Basis1D bx, Basis1D by)
    : bx_(std::move(bx)), by_(std::move(by)), plans_(std::make_unique<Plans>()) {
    const std::size_t n = size();
    lambda_.resize(n);
    scale_fwd_.resize(n);
    scale_inv_.resize(n);
    for (int ky = 0; ky < by_.size; ++ky) {
        for (int kx = 0; kx < bx_.size; ++kx) {
            const auto k = static_cast<std::size_t>(kx + bx_.size * ky);
            const double nx = bx_.norm[static_cast<std::size_t>(kx)], ny = by_.norm[static_cast<std::size_t>(ky)];
            lambda_[k] = bx_.lambda[static_cast<std::size_t>(kx)] + by_.lambda[static_cast<std::size_t>(ky)];
            // Raw forward transforms carry a factor 2 per axis.
            scale_fwd_[k] = 1.0 / (4.0 * nx * ny);
            scale_inv_[k] = inverse_weight(bx_, kx) * inverse_weight(by_, ky) / (nx * ny);
        }
    }
    // Row-major for FFTW: the slow index is y.
    plans_->buf = fftw_alloc_real(n);
    plans_->fwd = fftw_plan_r2r_2d(by_.size, bx_.size, plans_->buf, plans_->buf, forward_kind(by_.bc),
                                   forward_kind(bx_.bc), FFTW_ESTIMATE);
    plans_->inv = fftw_plan_r2r_2d(by_.size, bx_.size, plans_->buf, plans_->buf, inverse_kind(by_.bc),
                                   inverse_kind(bx_.bc), FFTW_ESTIMATE);
    if (!plans_->fwd || !plans_->inv) throw std::runtime_error("SeparableTransform: FFTW planning failed");
}

SeparableTransform::~SeparableTransform() = default;

void SeparableTransform::forward(std::span<const double> in, std::span<double> out) const {
    if (in.size() != size() || out.size() != size()) throw std::invalid_argument("SeparableTransform: size mismatch");
    double* buf = plans_->buf;
    std::copy(in.begin(), in.end(), buf);
    fftw_execute(plans_->fwd);
    for (std::size_t k = 0; k < size(); ++k) out[k] = buf[k] * scale_fwd_[k];
}

void SeparableTransform::inverse(std::span<const double> in, std::span<double> out) const {
    if (in.size() != size() || out.size() != size()) throw std::invalid_argument("SeparableTransform: size mismatch");
    double* buf = plans_->buf;
    for (std::size_t k = 0; k < size(); ++k) buf[k] = in[k] * scale_inv_[k];
    fftw_execute(plans_->inv);
    std::copy(buf, buf + size(), out.begin());
}

void SeparableTransform::apply(std::span<const double> in, std::span<double> out,
                               const std::function<double(double)>& multiplier) const {
    Vector coef(size());
    forward(in, coef);
    for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= multiplier(lambda_[k]);
    inverse(coef, out);
}

NeumannSolver::NeumannSolver(const GridSpec& g)
    : t_(make_basis(Boundary1D::NeumannCell, g.nx(), g.hx()), make_basis(Boundary1D::NeumannCell, g.ny(), g.hy())) {}

void NeumannSolver::solve(std::span<const double> r, std::span<double> x, double alpha, double beta) const {
    Vector coef(t_.size());
    t_.forward(r, coef);
    for (std::size_t k = 0; k < coef.size(); ++k) {
        const double d = alpha + beta * t_.lambda(k);
        coef[k] = (k == 0 && alpha == 0.0) ? 0.0 : coef[k] / d;
    }
    t_.inverse(coef, x);
}

VelocitySolver::VelocitySolver(const GridSpec& g)
    : grid_(g),
      tx_(make_basis(Boundary1D::DirichletNode, g.nx(), g.hx()), make_basis(Boundary1D::DirichletCell, g.ny(), g.hy())),
      ty_(make_basis(Boundary1D::DirichletCell, g.nx(), g.hx()), make_basis(Boundary1D::DirichletNode, g.ny(), g.hy())),
      bufx_(tx_.size()),
      bufy_(ty_.size()) {}

void VelocitySolver::solve(std::span<const double> r, std::span<double> u, double alpha, double beta) const {
    const int nx = grid_.nx(), ny = grid_.ny();
    std::copy(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(grid_.num_faces()), u.begin());
    auto mult = [alpha, beta](double lam) { return 1.0 / (alpha + beta * lam); };
    // x-velocity interior: i = 1..nx-1, j = 0..ny-1
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) bufx_[static_cast<std::size_t>((i - 1) + (nx - 1) * j)] = r[grid_.xface(i, j)];
    }
    Vector solx(tx_.size());
    tx_.apply(bufx_, solx, mult);
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) u[grid_.xface(i, j)] = solx[static_cast<std::size_t>((i - 1) + (nx - 1) * j)];
    }
    // y-velocity interior: i = 0..nx-1, j = 1..ny-1
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) bufy_[static_cast<std::size_t>(i + nx * (j - 1))] = r[grid_.yface(i, j)];
    }
    Vector soly(ty_.size());
    ty_.apply(bufy_, soly, mult);
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) u[grid_.yface(i, j)] = soly[static_cast<std::size_t>(i + nx * (j - 1))];
    }
}

}  // namespace chimhd
