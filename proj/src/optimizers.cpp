#include "altclust/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace altclust {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Thin QR with positive R diagonal so the retraction is deterministic.
Matrix qr_retract(const Matrix& M) {
    if (M.cols() == 1) {
        // Thin QR of a single column is the column normalized, R = (||M||).
        const double nrm = M.col(0).norm();
        if (nrm > 0.0) return M / nrm;
    }
    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Q = qr.householderQ() * Matrix::Identity(M.rows(), M.cols());
    const Matrix R = qr.matrixQR().topLeftCorner(M.cols(), M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
}

Vector rayleigh_diagonal(const WSubproblem& prob, const Matrix& W) {
    const Matrix phi = phi_matrix(prob, W);
    return (W.transpose() * phi * W).diagonal();
}

}  // namespace

SolverMethod solver_method_from_string(const std::string& name) {
    if (name == "ism") return SolverMethod::ISM;
    if (name == "sm") return SolverMethod::SM;
    if (name == "dg") return SolverMethod::DG;
    throw std::invalid_argument("unknown solver '" + name + "' (expected ism, sm or dg)");
}

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::ISM: return "ism";
        case SolverMethod::SM: return "sm";
        case SolverMethod::DG: return "dg";
    }
    return "?";
}

StiefelPoint spectral_init(const WSubproblem& prob) {
    const Matrix psi = prob.gamma / (prob.sigma * prob.sigma);
    const Vector deg = psi.rowwise().sum();
    Matrix phi0 = 2.0 * (prob.X.transpose() * (Matrix(deg.asDiagonal()) - psi) * prob.X);
    phi0 = 0.5 * (phi0 + phi0.transpose());
    return eig_min(phi0, prob.q);
}

StiefelPoint random_init(Eigen::Index d, Eigen::Index q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix M(d, q);
    for (Eigen::Index j = 0; j < q; ++j)
        for (Eigen::Index i = 0; i < d; ++i) M(i, j) = gauss(rng);
    StiefelPoint p;
    p.W = qr_retract(M);
    return p;
}

SolveResult ism_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg) {
    if (orthonormality_defect(W0.W) > 1e-6)
        throw std::invalid_argument("ism_solve: W0 must be column-orthonormal");
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.W = W0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const Matrix phi = phi_matrix(prob, res.W.W);
        StiefelPoint next = eig_min(phi, prob.q);
        const double step = subspace_distance(res.W.W, next.W);
        res.W = std::move(next);
        IterRecord rec;
        rec.iteration = k;
        rec.cost = f_cost(prob, res.W.W);
        rec.residual = stationarity_residual(prob, res.W);
        rec.step = step;
        rec.wall_s = seconds_since(t0);
        res.trace.records.push_back(rec);
        res.trace.iterations = k;
        if (step <= cfg.tol) {
            res.trace.converged = true;
            break;
        }
    }
    // The loop's eigenvalues belong to Φ at the previous iterate; refresh
    // them at the returned point so Λ certifies W itself (Lemma 2 check).
    if (res.trace.iterations > 0)
        res.W.eigenvalues = sym_eig_full(phi_matrix(prob, res.W.W)).values.head(prob.q);
    return res;
}

SolveResult sm_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg) {
    if (orthonormality_defect(W0.W) > 1e-6)
        throw std::invalid_argument("sm_solve: W0 must be column-orthonormal");
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    Matrix W = W0.W;
    double F = f_cost(prob, W);
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const Matrix G = f_gradient(prob, W);
        const Matrix WtG = W.transpose() * G;
        const Matrix GR = G - W * (0.5 * (WtG + WtG.transpose()));
        const double gn = GR.norm();
        if (gn <= cfg.tol * (1.0 + std::abs(F))) {
            res.trace.converged = true;
            break;
        }
        double eta = cfg.sm_step;
        Matrix Wtrial;
        double Ftrial = F;
        bool accepted = false;
        while (eta >= 1e-16) {
            Wtrial = qr_retract(W - eta * GR);
            Ftrial = f_cost(prob, Wtrial);
            if (Ftrial <= F - cfg.armijo_c * eta * gn * gn) {
                accepted = true;
                break;
            }
            eta *= cfg.sm_backtrack;
        }
        if (!accepted) {
            res.trace.stalled = true;
            break;
        }
        IterRecord rec;
        rec.iteration = k;
        rec.cost = Ftrial;
        rec.residual = gn / (1.0 + std::abs(F));
        rec.step = subspace_distance(W, Wtrial);
        rec.wall_s = seconds_since(t0);
        res.trace.records.push_back(rec);
        res.trace.iterations = k;
        W = Wtrial;
        F = Ftrial;
    }
    res.W.W = W;
    res.W.eigenvalues = rayleigh_diagonal(prob, W);
    return res;
}

SolveResult dg_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg) {
    if (orthonormality_defect(W0.W) > 1e-6)
        throw std::invalid_argument("dg_solve: W0 must be column-orthonormal");
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index d = prob.X.cols(), q = prob.q;
    SolveResult res;
    Matrix W = W0.W;
    int total_iter = 0;
    bool all_converged = true;

    for (Eigen::Index c = 0; c < q; ++c) {
        const Matrix fixed = W.leftCols(c);
        auto project_unit = [&](Vector v) -> Vector {
            if (c > 0) v -= fixed * (fixed.transpose() * v);
            const double nrm = v.norm();
            if (nrm < 1e-12) {
                // Column collapse: re-seed from the complement of the fixed span.
                res.trace.stalled = true;
                for (Eigen::Index i = 0; i < d; ++i) {
                    Vector e = Vector::Unit(d, i);
                    if (c > 0) e -= fixed * (fixed.transpose() * e);
                    if (e.norm() > 0.5) return e / e.norm();
                }
                throw std::runtime_error("dg_solve: could not re-seed collapsed column");
            }
            return v / nrm;
        };

        Vector w = project_unit(W.col(c));
        Matrix part(d, c + 1);
        part.leftCols(c) = fixed;
        part.col(c) = w;
        double F = f_cost(prob, part);
        bool col_converged = false;

        for (int it = 1; it <= cfg.dg_inner_max; ++it) {
            const Matrix G = f_gradient(prob, part);
            Vector g = G.col(c);
            // Tangent component within the feasible set for this column.
            Vector gtan = g;
            if (c > 0) gtan -= fixed * (fixed.transpose() * gtan);
            gtan -= w.dot(gtan) * w;
            const double gn = gtan.norm();
            if (gn <= cfg.tol * (1.0 + std::abs(F))) {
                col_converged = true;
                break;
            }
            double eta = cfg.sm_step;
            bool accepted = false;
            Vector wtrial;
            double Ftrial = F;
            while (eta >= 1e-16) {
                wtrial = project_unit(w - eta * g);
                Matrix trial = part;
                trial.col(c) = wtrial;
                Ftrial = f_cost(prob, trial);
                if (Ftrial <= F - cfg.armijo_c * eta * gn * gn) {
                    accepted = true;
                    break;
                }
                eta *= cfg.sm_backtrack;
            }
            if (!accepted) {
                res.trace.stalled = true;
                break;
            }
            ++total_iter;
            w = wtrial;
            part.col(c) = w;
            const double step = std::abs(1.0 - std::abs(part.col(c).dot(W.col(c))));
            F = Ftrial;
            IterRecord rec;
            rec.iteration = total_iter;
            rec.cost = F;
            rec.residual = gn / (1.0 + std::abs(F));
            rec.step = step;
            rec.wall_s = seconds_since(t0);
            res.trace.records.push_back(rec);
        }
        if (!col_converged) all_converged = false;
        W.col(c) = w;
    }
    res.trace.iterations = total_iter;
    res.trace.converged = all_converged;
    res.W.W = W;
    res.W.eigenvalues = rayleigh_diagonal(prob, W);
    return res;
}

SolveResult solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg) {
    switch (cfg.method) {
        case SolverMethod::ISM: return ism_solve(prob, W0, cfg);
        case SolverMethod::SM: return sm_solve(prob, W0, cfg);
        case SolverMethod::DG: return dg_solve(prob, W0, cfg);
    }
    throw std::logic_error("solve: unreachable");
}

}  // namespace altclust
