#include "chimhd/saddle.hpp"

#include <stdexcept>

namespace chimhd {

CurrentSolution schur_current_solve(const FaceField& face_coeff, const FaceField& rhs_face, double tol, int maxit) {
    const GridSpec& g = face_coeff.grid();
    if (!(g == rhs_face.grid())) throw std::invalid_argument("schur_current_solve: grid mismatch");

    FaceField inv_coeff(g);
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 1; i < g.nx(); ++i) {
            if (!(face_coeff.x(i, j) > 0.0)) throw std::invalid_argument("schur_current_solve: face_coeff must be > 0");
            inv_coeff.x(i, j) = 1.0 / face_coeff.x(i, j);
        }
    }
    for (int j = 1; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (!(face_coeff.y(i, j) > 0.0)) throw std::invalid_argument("schur_current_solve: face_coeff must be > 0");
            inv_coeff.y(i, j) = 1.0 / face_coeff.y(i, j);
        }
    }

    FaceField scaled_rhs = rhs_face;
    scaled_rhs.zero_boundary();
    for (std::size_t k = 0; k < scaled_rhs.size(); ++k) scaled_rhs.values()[k] *= inv_coeff.values()[k];

    const SparseMatrix a = diffusion_matrix(inv_coeff);
    CellField b = div_face_to_cell(scaled_rhs);
    for (double& v : b.values()) v = -v;

    CgOptions opts;
    opts.constant_nullspace = true;
    SolveResult sol = cg_solve(a, b.values(), tol, maxit, opts);
    if (!sol.report.converged) throw SolverError("current solve: CG did not converge (" + sol.report.note + ")", sol.report);

    CurrentSolution out{FaceField(g), CellField(g, std::move(sol.x)), sol.report};
    remove_mean(out.epot);
    const FaceField ge = grad_cell_to_face(out.epot);
    for (std::size_t k = 0; k < out.current.size(); ++k) {
        out.current.values()[k] = scaled_rhs.values()[k] - inv_coeff.values()[k] * ge.values()[k];
    }
    out.current.zero_boundary();
    return out;
}

}  // namespace chimhd
