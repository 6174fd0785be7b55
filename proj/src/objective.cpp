#include "altclust/objective.hpp"

#include "altclust/kernel_hsic.hpp"

#include <stdexcept>
#include <utility>

namespace altclust {

WSubproblem::WSubproblem(Matrix X_, Matrix psi_, Vector dinv_sqrt_, double sigma_,
                         Eigen::Index q_)
    : X(std::move(X_)),
      gamma_psi(std::move(psi_)),
      dinv_sqrt(std::move(dinv_sqrt_)),
      sigma(sigma_),
      q(q_) {
    if (!X.allFinite()) throw std::invalid_argument("WSubproblem: X has non-finite entries");
    if (sigma <= 0.0) throw std::invalid_argument("WSubproblem: sigma must be positive");
    if (q < 1 || q > X.cols()) throw std::invalid_argument("WSubproblem: q out of range");
    if (gamma_psi.rows() != X.rows() || gamma_psi.cols() != X.rows() ||
        dinv_sqrt.size() != X.rows())
        throw std::invalid_argument("WSubproblem: psi/dinv size mismatch with X");
    gamma = dinv_sqrt.asDiagonal() * gamma_psi * dinv_sqrt.asDiagonal();
    gamma = 0.5 * (gamma + gamma.transpose());
}

double f_cost(const WSubproblem& prob, const Matrix& W) {
    const KernelBundle b = gaussian_kernel(prob.X, W, prob.sigma);
    return -(prob.gamma.array() * b.K.array()).sum();
}

Matrix phi_matrix(const WSubproblem& prob, const Matrix& W) {
    const KernelBundle b = gaussian_kernel(prob.X, W, prob.sigma);
    const Matrix psi = (prob.gamma.array() * b.K.array()).matrix() / (prob.sigma * prob.sigma);
    const Vector deg = psi.rowwise().sum();
    // Sum over ordered pairs of psi_ij (x_i - x_j)(x_i - x_j)^T
    Matrix lap = Matrix(deg.asDiagonal()) - psi;
    Matrix phi = 2.0 * (prob.X.transpose() * lap * prob.X);
    return 0.5 * (phi + phi.transpose());
}

Matrix f_gradient(const WSubproblem& prob, const Matrix& W) {
    return phi_matrix(prob, W) * W;
}

double stationarity_residual(const WSubproblem& prob, const StiefelPoint& W) {
    if (!W.eigenvalues)
        throw std::invalid_argument("stationarity_residual: W carries no eigenvalues");
    const Matrix phi = phi_matrix(prob, W.W);
    const Matrix resid = phi * W.W - W.W * W.eigenvalues->asDiagonal();
    return resid.norm() / (1.0 + phi.norm());
}

}  // namespace altclust
