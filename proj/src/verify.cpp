#include "altclust/verify.hpp"

#include "altclust/kernel_hsic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace altclust {

double eigengap(const Vector& values, Eigen::Index q) {
    if (q < 1 || q >= values.size())
        throw std::invalid_argument("eigengap: q must satisfy 1 <= q < d");
    return values[q] - values[q - 1];
}

Eigen::Index suggest_q(const Vector& values, Eigen::Index q_max) {
    if (q_max < 1 || q_max >= values.size())
        throw std::invalid_argument("suggest_q: q_max must satisfy 1 <= q_max < d");
    Eigen::Index best_q = 1;
    double best_gap = eigengap(values, 1);
    for (Eigen::Index q = 2; q <= q_max; ++q) {
        const double gap = eigengap(values, q);
        if (gap > best_gap) {
            best_gap = gap;
            best_q = q;
        }
    }
    return best_q;
}

SigmaCondition sigma_condition(const WSubproblem& prob, const StiefelPoint& W,
                               const EigenPairs& full_spectrum) {
    const Eigen::Index q = W.rank(), d = prob.X.cols(), n = prob.X.rows();
    if (q >= d)
        throw std::invalid_argument("sigma_condition: q = d leaves no complement eigenvalues");
    const double s2 = prob.sigma * prob.sigma;
    SigmaCondition out;
    out.lhs = s2 * eigengap(full_spectrum.values, q);

    const KernelBundle b = gaussian_kernel(prob.X, W.W, prob.sigma);
    double rhs = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (prob.X.row(i) - prob.X.row(j)).squaredNorm();
            // Tr(A_ij^T A_ij) = ||x_i - x_j||^4 since A_ij is rank one.
            rhs += 2.0 * std::abs(prob.gamma(i, j)) * b.K(i, j) * d2 * d2;
        }
    }
    out.rhs = rhs / s2;
    out.holds = out.lhs >= out.rhs;
    return out;
}

double directional_second_order(const WSubproblem& prob, const StiefelPoint& W, const Matrix& Z) {
    if (!W.eigenvalues)
        throw std::invalid_argument("directional_second_order: W carries no eigenvalues");
    if ((Z.transpose() * W.W + W.W.transpose() * Z).norm() > 1e-8)
        throw std::invalid_argument("directional_second_order: Z is not a feasible tangent");
    const Eigen::Index n = prob.X.rows();
    const double s2 = prob.sigma * prob.sigma;
    const KernelBundle b = gaussian_kernel(prob.X, W.W, prob.sigma);
    const Matrix PZ = prob.X * Z;
    const Matrix PW = prob.X * W.W;

    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::RowVectorXd zd = PZ.row(i) - PZ.row(j);
            const Eigen::RowVectorXd wd = PW.row(i) - PW.row(j);
            const double cross = zd.dot(wd);
            const double term = zd.squaredNorm() - cross * cross / s2;
            acc += 2.0 * (prob.gamma(i, j) / s2) * b.K(i, j) * term;
        }
    }
    double lambda_term = 0.0;
    for (Eigen::Index c = 0; c < W.rank(); ++c)
        lambda_term += (*W.eigenvalues)[c] * Z.col(c).squaredNorm();
    return acc - lambda_term;
}

Matrix finite_diff_gradient(const WSubproblem& prob, const Matrix& W, double h) {
    if (h < 1e-7 || h > 1e-3)
        throw std::invalid_argument("finite_diff_gradient: h must lie in [1e-7, 1e-3]");
    Matrix G(W.rows(), W.cols());
    Matrix Wp = W;
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        for (Eigen::Index i = 0; i < W.rows(); ++i) {
            Wp(i, j) = W(i, j) + h;
            const double fp = f_cost(prob, Wp);
            Wp(i, j) = W(i, j) - h;
            const double fm = f_cost(prob, Wp);
            Wp(i, j) = W(i, j);
            G(i, j) = (fp - fm) / (2.0 * h);
        }
    }
    return G;
}

OptimalityReport optimality_report(const WSubproblem& prob, const StiefelPoint& W,
                                   int n_directions, std::uint64_t seed) {
    OptimalityReport rep;
    rep.orthonormality_defect = orthonormality_defect(W.W);
    rep.stationarity_residual = stationarity_residual(prob, W);

    const Matrix phi = phi_matrix(prob, W.W);
    const EigenPairs full = sym_eig_full(phi);
    const Eigen::Index q = W.rank(), d = phi.rows();
    if (q < d) {
        rep.eigengap = eigengap(full.values, q);
        const SigmaCondition sc = sigma_condition(prob, W, full);
        rep.sigma_lhs = sc.lhs;
        rep.sigma_rhs = sc.rhs;
        rep.sigma_condition_holds = sc.holds;
    }
    const double abs_max = full.values.cwiseAbs().maxCoeff();
    const double abs_min = full.values.cwiseAbs().minCoeff();
    rep.phi_rank_ok = abs_max > 0.0 && (abs_min / abs_max) > 1e-10;

    rep.min_curvature = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_directions; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        const Matrix Z = random_feasible_tangent(W, s);
        const double c = directional_second_order(prob, W, Z);
        rep.curvature_samples.emplace_back(s, c);
        rep.min_curvature = std::min(rep.min_curvature, c);
    }
    if (n_directions == 0) rep.min_curvature = 0.0;
    return rep;
}

}  // namespace altclust
