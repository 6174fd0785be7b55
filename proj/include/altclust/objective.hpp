#ifndef ALTCLUST_OBJECTIVE_HPP
#define ALTCLUST_OBJECTIVE_HPP

#include "altclust/matrix_core.hpp"

namespace altclust {

/// Frozen context of the W-subproblem: data, pair weights, kernel width and
/// target subspace dimension. The pairwise scatter matrices
/// A_ij = (x_i - x_j)(x_i - x_j)^T are never materialized; every contraction
/// routes through X and weighted-Laplacian identities.
struct WSubproblem {
    Matrix X;           // n x d, preprocessed samples
    Matrix gamma_psi;   // n x n symmetric, un-degree-scaled psi
    Vector dinv_sqrt;   // frozen degree scaling for this subproblem
    double sigma = 1.0;
    Eigen::Index q = 1;

    /// diag(dinv_sqrt) * psi * diag(dinv_sqrt), cached at construction.
    Matrix gamma;

    WSubproblem(Matrix X_, Matrix psi_, Vector dinv_sqrt_, double sigma_, Eigen::Index q_);
};

/// F(W) = -Sum_ij gamma_ij exp(-||W^T (x_i - x_j)||^2 / (2 sigma^2))
double f_cost(const WSubproblem& prob, const Matrix& W);

/// grad F(W) = phi_matrix(prob, W) * W
Matrix f_gradient(const WSubproblem& prob, const Matrix& W);

/// Phi(W) = Sum_ij (gamma_ij / sigma^2) exp(-...) A_ij, assembled as
/// 2 X^T (D_Psi - Psi) X with Psi = (gamma .* K(W)) / sigma^2. The factor 2
/// comes from summing over ordered pairs with symmetric weights.
Matrix phi_matrix(const WSubproblem& prob, const Matrix& W);

/// ||Phi(W) W - W diag(Lambda)||_F / (1 + ||Phi(W)||_F); W must carry its
/// eigenvalues.
double stationarity_residual(const WSubproblem& prob, const StiefelPoint& W);

}  // namespace altclust

#endif
