#include "chimhd/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace chimhd {
namespace {

void remove_mean(std::span<double> v) {
    if (v.empty()) return;
    double s = 0.0;
    for (double x : v) s += x;
    s /= static_cast<double>(v.size());
    for (double& x : v) x -= s;
}

Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
    Vector r = a * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

void check_square(const SparseMatrix& a, std::size_t nb, const char* who) {
    if (a.rows() != a.cols() || a.rows() != nb) {
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    }
}

}  // namespace

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
    Vector r = residual(a, x, b);
    double nb = norm2(b);
    double nr = norm2(r);
    return nb > 0.0 ? nr / nb : nr;
}

Preconditioner jacobi_preconditioner(const SparseMatrix& a) {
    Vector inv = a.diagonal();
    for (double& d : inv) d = (d != 0.0) ? 1.0 / d : 1.0;
    return [inv = std::move(inv)](std::span<const double> r, std::span<double> z) {
        for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv[i] * r[i];
    };
}

SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, int maxit,
                     const CgOptions& options) {
    check_square(a, b.size(), "cg_solve");
    const std::size_t n = b.size();
    // With a constant kernel only mean-free vectors are in the range, so b
    // and every residual are measured without their (round-off) mean.
    Vector b_range;
    if (options.constant_nullspace) {
        b_range.assign(b.begin(), b.end());
        remove_mean(b_range);
        b = b_range;
    }
    SolveResult out;
    out.x = options.initial_guess.empty() ? Vector(n, 0.0) : options.initial_guess;
    if (out.x.size() != n) throw std::invalid_argument("cg_solve: initial guess size mismatch");

    const double nb = norm2(b);
    if (nb == 0.0) {
        std::fill(out.x.begin(), out.x.end(), 0.0);
        out.report = {0, 0.0, true, {}};
        return out;
    }
    Preconditioner precond = options.preconditioner ? options.preconditioner : jacobi_preconditioner(a);

    // The iterate is re-centred first so that the residual which decides
    // convergence is the one of the returned x.
    auto true_residual = [&] {
        if (options.constant_nullspace) remove_mean(out.x);
        Vector t = residual(a, out.x, b);
        if (options.constant_nullspace) remove_mean(t);
        return t;
    };

    Vector r = true_residual();
    Vector z(n), p(n), q(n);
    precond(r, z);
    if (options.constant_nullspace) remove_mean(z);
    p = z;
    double rz = dot(r, z);
    int it = 0;
    std::string note;
    double final_res = -1.0;
    while (it < maxit) {
        if (norm2(r) <= tol * nb) {
            // The recurrence may drift from the true residual; confirm.
            r = true_residual();
            if (norm2(r) <= tol * nb) {
                final_res = norm2(r) / nb;
                break;
            }
            precond(r, z);
            if (options.constant_nullspace) remove_mean(z);
            p = z;
            rz = dot(r, z);
        }
        a.multiply(p, q);
        double pq = dot(p, q);
        if (!(pq > 0.0)) {
            note = "breakdown";
            break;
        }
        double alpha = rz / pq;
        axpy(alpha, p, out.x);
        axpy(-alpha, q, r);
        precond(r, z);
        if (options.constant_nullspace) remove_mean(z);
        double rz_new = dot(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        ++it;
    }
    out.report.iterations = it;
    out.report.final_residual = final_res >= 0.0 ? final_res : norm2(true_residual()) / nb;
    out.report.converged = out.report.final_residual <= tol;
    if (!out.report.converged) out.report.note = note.empty() ? "maxit" : note;
    return out;
}

SolveResult gmres_solve(const SparseMatrix& a, std::span<const double> b, double tol, int maxit,
                        const GmresOptions& options) {
    check_square(a, b.size(), "gmres_solve");
    if (options.restart < 1) throw std::invalid_argument("gmres_solve: restart must be >= 1");
    const std::size_t n = b.size();
    SolveResult out;
    out.x = options.initial_guess.empty() ? Vector(n, 0.0) : options.initial_guess;
    if (out.x.size() != n) throw std::invalid_argument("gmres_solve: initial guess size mismatch");

    const double nb = norm2(b);
    if (nb == 0.0) {
        std::fill(out.x.begin(), out.x.end(), 0.0);
        out.report = {0, 0.0, true, {}};
        return out;
    }
    auto apply_precond = [&](std::span<const double> v, std::span<double> z) {
        if (options.preconditioner) {
            options.preconditioner(v, z);
        } else {
            std::copy(v.begin(), v.end(), z.begin());
        }
    };

    const int m = options.restart;
    std::vector<Vector> basis(static_cast<std::size_t>(m) + 1, Vector(n));
    std::vector<Vector> zvecs(static_cast<std::size_t>(m), Vector(n));
    std::vector<Vector> h(static_cast<std::size_t>(m) + 1, Vector(static_cast<std::size_t>(m), 0.0));
    Vector cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m)), g(static_cast<std::size_t>(m) + 1);
    Vector w(n);

    int total = 0;
    std::string note;
    double true_res = relative_residual(a, out.x, b);
    while (true_res > tol && total < maxit) {
        Vector r = residual(a, out.x, b);
        double beta = norm2(r);
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        int k = 0;
        bool lucky = false;
        for (; k < m && total < maxit; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            apply_precond(basis[uk], zvecs[uk]);
            a.multiply(zvecs[uk], w);
            for (int j = 0; j <= k; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                h[uj][uk] = dot(w, basis[uj]);
                axpy(-h[uj][uk], basis[uj], w);
            }
            double hn = norm2(w);
            h[uk + 1][uk] = hn;
            if (hn > 0.0) {
                for (std::size_t i = 0; i < n; ++i) basis[uk + 1][i] = w[i] / hn;
            } else {
                lucky = true;
            }
            for (int j = 0; j < k; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                double t = cs[uj] * h[uj][uk] + sn[uj] * h[uj + 1][uk];
                h[uj + 1][uk] = -sn[uj] * h[uj][uk] + cs[uj] * h[uj + 1][uk];
                h[uj][uk] = t;
            }
            double denom = std::hypot(h[uk][uk], h[uk + 1][uk]);
            if (denom == 0.0) {
                note = "breakdown";
                break;
            }
            cs[uk] = h[uk][uk] / denom;
            sn[uk] = h[uk + 1][uk] / denom;
            h[uk][uk] = denom;
            h[uk + 1][uk] = 0.0;
            g[uk + 1] = -sn[uk] * g[uk];
            g[uk] = cs[uk] * g[uk];
            ++total;
            if (std::abs(g[uk + 1]) <= 0.5 * tol * nb || lucky) {
                ++k;
                break;
            }
        }
        // Back-substitute and update x += Z y.
        Vector y(static_cast<std::size_t>(k), 0.0);
        for (int i = k - 1; i >= 0; --i) {
            const auto ui = static_cast<std::size_t>(i);
            double s = g[ui];
            for (int j = i + 1; j < k; ++j) s -= h[ui][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
            y[ui] = s / h[ui][ui];
        }
        for (int j = 0; j < k; ++j) axpy(y[static_cast<std::size_t>(j)], zvecs[static_cast<std::size_t>(j)], out.x);
        true_res = relative_residual(a, out.x, b);
        if (!note.empty()) break;
        if (k == 0) break;
    }
    out.report.iterations = total;
    out.report.final_residual = true_res;
    out.report.converged = true_res <= tol;
    if (!out.report.converged) out.report.note = note.empty() ? "maxit" : note;
    return out;
}

}  // namespace chimhd
