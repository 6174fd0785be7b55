#ifndef ALTCLUST_KERNEL_HSIC_HPP
#define ALTCLUST_KERNEL_HSIC_HPP

#include "altclust/matrix_core.hpp"

namespace altclust {

/// Gaussian Gram matrix of the projected data XW together with its degree
/// vector and the D^(-1/2) diagonal used for kernel normalization.
struct KernelBundle {
    Matrix K;           // n x n, symmetric, unit diagonal, entries in (0, 1]
    Vector degrees;     // row sums of K, each >= 1
    Vector dinv_sqrt;   // degrees^(-1/2)
    double sigma = 0.0;
};

/// Pair-coupling weights of the W-subproblem.
/// psi = H (U U^T - lambda Y Y^T) H is kept un-scaled because the degree
/// scaling is frozen per master iteration while psi survives it.
struct GammaMatrix {
    Matrix gamma;  // diag(dinv_sqrt) * psi * diag(dinv_sqrt)
    Matrix psi;
    double lambda_weight = 0.0;
};

/// K_ij = exp(-||W^T (x_i - x_j)||^2 / (2 sigma^2)). W need not be
/// orthonormal; W = 0 gives the all-ones matrix. Exponents are clamped at
/// -700 before exponentiation.
KernelBundle gaussian_kernel(const Matrix& X, const Matrix& W, double sigma);

/// D^(-1/2) K D^(-1/2)
Matrix normalize_kernel(const KernelBundle& bundle);

/// Tr(Ka H Kb H) / (n-1)^2. The 1/(n-1)^2 factor is applied here, in the
/// metric, but dropped inside the optimization weights (gamma_matrix /
/// cost_hadamard): it is a positive constant and moves no argmin.
double hsic(const Matrix& Ka, const Matrix& Kb);

/// gamma = D^(-1/2) H (U U^T - lambda Y Y^T) H D^(-1/2) for the given bundle.
GammaMatrix gamma_matrix(const Matrix& U, const Matrix& Y, double lambda_weight,
                         const KernelBundle& bundle);

/// Sum_ij gamma_ij K_ij over the caller's current bundle; the negated value
/// is F(W). Unnormalized: see hsic() note.
double cost_hadamard(const GammaMatrix& gm, const KernelBundle& bundle);

}  // namespace altclust

#endif
