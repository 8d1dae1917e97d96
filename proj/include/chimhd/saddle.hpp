/// @file saddle.hpp
/// @brief Schur-complement solve of the mixed current / electric-potential system
///
///     D J + grad e = R,   div J = 0,   J.n = 0 on the walls,
///
/// with a face-diagonal positive D. Eliminating J gives the variable
/// coefficient Neumann problem -div(D^{-1} grad e) = -div(D^{-1} R), solved by
/// Jacobi-preconditioned CG; J is then recovered face by face and its
/// divergence equals minus the CG residual.
#pragma once

#include "chimhd/grid.hpp"
#include "chimhd/krylov.hpp"

namespace chimhd {

struct CurrentSolution {
    FaceField current;
    CellField epot;  ///< zero cell-mean
    SolveReport report;
};

/// Throws std::invalid_argument for nonpositive face_coeff on interior faces
/// and SolverError when CG does not reach `tol`.
CurrentSolution schur_current_solve(const FaceField& face_coeff, const FaceField& rhs_face, double tol,
                                    int maxit = 20000);

}  // namespace chimhd
