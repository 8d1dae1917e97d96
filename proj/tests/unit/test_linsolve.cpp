#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>

#include "chimhd/krylov.hpp"
#include "chimhd/saddle.hpp"
#include "chimhd/spectral.hpp"
#include "support.hpp"

using namespace chimhd;

TEST_CASE("builder sums duplicates and drops cancellations") {
    SparseBuilder b(3, 3);
    b.add(0, 2, 1.0);
    b.add(0, 2, 2.0);
    b.add(1, 1, 1.0);
    b.add(1, 1, -1.0);
    b.add(2, 0, 5.0);
    const SparseMatrix m = b.build();
    CHECK(m.nonzeros() == 2);
    CHECK(m.at(0, 2) == 3.0);
    CHECK(m.at(1, 1) == 0.0);
    CHECK(m.transpose().at(0, 2) == 5.0);
    CHECK_THROWS_AS(b.add(3, 0, 1.0), std::out_of_range);
    {
        Vector x(2), y(3);
        CHECK_THROWS_AS(m.multiply(x, y), std::invalid_argument);
    }
    CHECK_THROWS_AS(SparseMatrix(2, 2, {0, 2, 2}, {1, 1}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("CG: identity, zero right side, Neumann Laplacian") {
    const Vector b{1.0, -2.0, 3.5};
    const SolveResult r = cg_solve(SparseMatrix::identity(3), b, 1e-12, 10);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 1);
    for (int k = 0; k < 3; ++k) CHECK(r.x[k] == doctest::Approx(b[k]));

    const SolveResult z = cg_solve(SparseMatrix::identity(3), Vector(3, 0.0), 1e-12, 10);
    CHECK(z.report.converged);
    CHECK(max_abs(z.x) == 0.0);

    std::mt19937_64 rng(4);
    const GridSpec g(16, 12);
    CellField rhs = test::random_cells(g, rng);
    remove_mean(rhs);
    const SparseMatrix a = diffusion_matrix(FaceField(g, 1.0));
    CgOptions opts;
    opts.constant_nullspace = true;
    const SolveResult s = cg_solve(a, rhs.values(), 1e-10, 2000, opts);
    CHECK(s.report.converged);
    CHECK(relative_residual(a, s.x, rhs.values()) <= 1e-10);
    CHECK(std::abs(relative_residual(a, s.x, rhs.values()) - s.report.final_residual) <= 1e-14);
    double m = 0.0;
    for (double v : s.x) m += v;
    CHECK(std::abs(m) < 1e-9);

    // A constant added to the right side lies outside the range and is
    // dropped instead of stalling the iteration.
    CellField exact = test::random_cells(g, rng);
    remove_mean(exact);
    Vector shifted = a * exact.values();
    for (double& v : shifted) v += 1e-3;
    const SolveResult t = cg_solve(a, shifted, 1e-12, 2000, opts);
    CHECK(t.report.converged);
    double err = 0.0;
    for (std::size_t k = 0; k < t.x.size(); ++k) err = std::max(err, std::abs(t.x[k] - exact.values()[k]));
    CHECK(err < 1e-9 * max_abs(exact));
}

TEST_CASE("CG reports breakdown on an indefinite matrix") {
    SparseBuilder b(2, 2);
    b.add(0, 0, 1.0);
    b.add(1, 1, -1.0);
    CgOptions opts;
    opts.preconditioner = [](std::span<const double> r, std::span<double> z) { std::copy(r.begin(), r.end(), z.begin()); };
    const SolveResult r = cg_solve(b.build(), Vector{1.0, 1.0}, 1e-12, 10, opts);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.note == "breakdown");
}

TEST_CASE("GMRES: identity, rotation, recomputed residual") {
    const SolveResult id = gmres_solve(SparseMatrix::identity(4), Vector{1, 2, 3, 4}, 1e-12, 10);
    CHECK(id.report.converged);
    CHECK(id.report.iterations == 1);

    SparseBuilder b(2, 2);
    b.add(0, 1, 1.0);
    b.add(1, 0, -1.0);
    const SparseMatrix rot = b.build();
    const SolveResult r = gmres_solve(rot, Vector{1.0, 0.0}, 1e-12, 10);
    CHECK(r.report.converged);
    CHECK(r.x[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(1.0));

    std::mt19937_64 rng(6);
    const GridSpec g(10, 10);
    SparseBuilder nb(g.num_cells(), g.num_cells());
    nb.add_block(diffusion_matrix(FaceField(g, 1.0)), 0, 0);
    nb.add_block(SparseMatrix::identity(g.num_cells()), 0, 0, 50.0);
    for (std::size_t k = 0; k + 1 < g.num_cells(); ++k) nb.add(k, k + 1, 3.0);
    const SparseMatrix a = nb.build();
    const CellField rhs = test::random_cells(g, rng);
    GmresOptions opts;
    opts.restart = 7;
    const SolveResult s = gmres_solve(a, rhs.values(), 1e-11, 500, opts);
    CHECK(s.report.converged);
    CHECK(std::abs(relative_residual(a, s.x, rhs.values()) - s.report.final_residual) <= 1e-14);
    CHECK(s.report.final_residual <= 1e-11);
}

TEST_CASE("spectral bases diagonalise the constant-coefficient operators") {
    std::mt19937_64 rng(7);
    const GridSpec g(12, 9, 1.0, 0.75);
    const NeumannSolver ns(g);
    CellField r = test::random_cells(g, rng);
    remove_mean(r);
    CellField x(g);
    ns.solve(r.values(), x.values(), 0.0, 1.0);
    const CellField back = laplacian_neumann(x);
    for (std::size_t k = 0; k < r.size(); ++k) CHECK(-back.values()[k] == doctest::Approx(r.values()[k]).epsilon(1e-10));
    CHECK(std::abs(mean(x)) < 1e-13);

    const SeparableTransform& t = ns.transform();
    Vector c(t.size()), y(t.size());
    t.forward(r.values(), c);
    t.inverse(c, y);
    for (std::size_t k = 0; k < y.size(); ++k) CHECK(y[k] == doctest::Approx(r.values()[k]).epsilon(1e-12));
}

TEST_CASE("fast transforms match the dense orthonormal bases") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Boundary1D kinds[] = {Boundary1D::NeumannCell, Boundary1D::DirichletNode, Boundary1D::DirichletCell};
    for (Boundary1D bx : kinds) {
        for (Boundary1D by : kinds) {
            const Basis1D a = make_basis(bx, 7, 0.1), b = make_basis(by, 6, 0.2);
            const Vector qa = dense_modes(a), qb = dense_modes(b);
            const SeparableTransform t(a, b);
            const int nx = a.size, ny = b.size;
            Vector x(t.size()), c(t.size()), back(t.size());
            for (double& v : x) v = u(rng);
            t.forward(x, c);
            for (int ky = 0; ky < ny; ++ky) {
                for (int kx = 0; kx < nx; ++kx) {
                    double ref = 0.0;
                    for (int j = 0; j < ny; ++j)
                        for (int i = 0; i < nx; ++i) ref += qa[kx * nx + i] * qb[ky * ny + j] * x[i + nx * j];
                    CHECK(c[kx + nx * ky] == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
                }
            }
            t.inverse(c, back);
            for (std::size_t k = 0; k < x.size(); ++k) CHECK(back[k] == doctest::Approx(x[k]).epsilon(1e-12));
            // Orthonormality: the row sums of squares are one.
            for (int m = 0; m < nx; ++m) {
                double s = 0.0;
                for (int i = 0; i < nx; ++i) s += qa[m * nx + i] * qa[m * nx + i];
                CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("velocity solver inverts alpha I - beta Laplacian on interior faces") {
    std::mt19937_64 rng(17);
    const GridSpec g(10, 8);
    const VelocitySolver vs(g);
    const FaceField r = test::random_faces(g, rng);
    FaceField u(g);
    vs.solve(r.values(), u.values(), 3.0, 0.5);
    CHECK(u.is_admissible());
    // Check against the vector Laplacian with no-slip ghosts: for an
    // x-velocity, (u_{i+1} - 2u_i + u_{i-1})/hx^2 along x and odd ghost
    // reflection along y.
    const double hx = g.hx(), hy = g.hy();
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) {
            const double c = u.x(i, j);
            const double s = j > 0 ? u.x(i, j - 1) : -c;
            const double n = j + 1 < g.ny() ? u.x(i, j + 1) : -c;
            const double lap = (u.x(i + 1, j) - 2 * c + u.x(i - 1, j)) / (hx * hx) + (n - 2 * c + s) / (hy * hy);
            CHECK(3.0 * c - 0.5 * lap == doctest::Approx(r.x(i, j)).epsilon(1e-10));
        }
    }
}

TEST_CASE("Schur current solve") {
    std::mt19937_64 rng(21);
    const GridSpec g(16, 16);
    FaceField coeff(g, 1.0);
    for (double& v : coeff.values()) v = 0.5 + std::uniform_real_distribution<double>(0.0, 2.0)(rng);

    SUBCASE("zero right side") {
        const CurrentSolution s = schur_current_solve(coeff, FaceField(g), 1e-12);
        CHECK(max_abs(s.current) == 0.0);
        CHECK(max_abs(s.epot) == 0.0);
    }
    SUBCASE("pure gradients are annihilated") {
        CellField e = test::random_cells(g, rng);
        remove_mean(e);
        const FaceField rhs = grad_cell_to_face(e);
        const CurrentSolution s = schur_current_solve(FaceField(g, 2.0), rhs, 1e-12);
        CHECK(max_abs(s.current) < 1e-9);
        for (std::size_t k = 0; k < e.size(); ++k) CHECK(s.epot.values()[k] == doctest::Approx(e.values()[k]).epsilon(1e-8));
    }
    SUBCASE("random right side is projected to zero divergence") {
        const FaceField rhs = test::random_faces(g, rng);
        const CurrentSolution s = schur_current_solve(coeff, rhs, 1e-12);
        CHECK(s.report.converged);
        CHECK(max_abs(div_face_to_cell(s.current)) <= 1e-10);
        CHECK(std::abs(mean(s.epot)) < 1e-14);
        CHECK(s.current.is_admissible());
    }
    SUBCASE("nonpositive coefficient") {
        FaceField bad = coeff;
        bad.x(3, 3) = 0.0;
        CHECK_THROWS_AS(schur_current_solve(bad, FaceField(g), 1e-12), std::invalid_argument);
    }
}
