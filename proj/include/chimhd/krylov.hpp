/// @file krylov.hpp
/// @brief Preconditioned conjugate gradients and restarted GMRES.
///
/// Both solvers report the *recomputed* relative residual ||b - A x|| / ||b||
/// of the returned iterate, never the recurrence estimate, so a report can be
/// checked independently against the matrix.
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "chimhd/sparse.hpp"

namespace chimhd {

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;  ///< relative 2-norm, recomputed from A, x, b
    bool converged = false;
    std::string note;             ///< "breakdown", "maxit", ... when not converged
};

/// Thrown by the time stepper when a linear solve does not converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

struct SolveResult {
    Vector x;
    SolveReport report;
};

/// z = P^{-1} r
using Preconditioner = std::function<void(std::span<const double> r, std::span<double> z)>;

struct CgOptions {
    /// Empty means Jacobi (inverse diagonal).
    Preconditioner preconditioner;
    /// Treat A as singular with the constant vector in its kernel: b and the
    /// residuals are projected onto zero mean (the range of a symmetric A)
    /// and the iterate is returned with zero mean.
    bool constant_nullspace = false;
    /// Optional starting guess (size must match when non-empty).
    Vector initial_guess;
};

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, int maxit,
                     const CgOptions& options = {});

struct GmresOptions {
    int restart = 50;
    /// Right preconditioner; empty means identity.
    Preconditioner preconditioner;
    Vector initial_guess;
};

SolveResult gmres_solve(const SparseMatrix& a, std::span<const double> b, double tol, int maxit,
                        const GmresOptions& options = {});

/// ||b - A x|| / ||b|| (0 when b = 0 and A x = 0).
double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

/// Jacobi preconditioner from the diagonal of `a` (zero diagonals map to 1).
Preconditioner jacobi_preconditioner(const SparseMatrix& a);

}  // namespace chimhd
