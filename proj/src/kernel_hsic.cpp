#include "altclust/kernel_hsic.hpp"

#include <cmath>
#include <stdexcept>

namespace altclust {

KernelBundle gaussian_kernel(const Matrix& X, const Matrix& W, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    if (!W.allFinite()) throw std::invalid_argument("gaussian_kernel: W has non-finite entries");
    if (X.cols() != W.rows()) throw std::invalid_argument("gaussian_kernel: X/W shape mismatch");
    const Eigen::Index n = X.rows();
    const Matrix P = X * W;  // n x q projected samples
    const Vector sq = P.rowwise().squaredNorm();
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);

    KernelBundle b;
    b.sigma = sigma;
    b.K.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b.K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = std::max(0.0, sq[i] + sq[j] - 2.0 * P.row(i).dot(P.row(j)));
            const double e = std::max(-700.0, -d2 * inv_two_sigma2);
            const double v = std::exp(e);
            b.K(i, j) = v;
            b.K(j, i) = v;
        }
    }
    b.degrees = b.K.rowwise().sum();
    b.dinv_sqrt = b.degrees.array().rsqrt();
    return b;
}

Matrix normalize_kernel(const KernelBundle& bundle) {
    return bundle.dinv_sqrt.asDiagonal() * bundle.K * bundle.dinv_sqrt.asDiagonal();
}

double hsic(const Matrix& Ka, const Matrix& Kb) {
    if (Ka.rows() != Ka.cols() || Kb.rows() != Kb.cols() || Ka.rows() != Kb.rows())
        throw std::invalid_argument("hsic: arguments must be square with matching size");
    const double n = static_cast<double>(Ka.rows());
    const Matrix HKbH = center_bilateral(Kb);
    const double tr = (Ka.array() * HKbH.array()).sum();
    return tr / ((n - 1.0) * (n - 1.0));
}

GammaMatrix gamma_matrix(const Matrix& U, const Matrix& Y, double lambda_weight,
                         const KernelBundle& bundle) {
    const Eigen::Index n = bundle.K.rows();
    if (U.rows() != n || Y.rows() != n)
        throw std::invalid_argument("gamma_matrix: row-count mismatch with bundle");
    GammaMatrix gm;
    gm.lambda_weight = lambda_weight;
    const Matrix M = U * U.transpose() - lambda_weight * (Y * Y.transpose());
    gm.psi = center_bilateral(M);
    gm.psi = 0.5 * (gm.psi + gm.psi.transpose());
    gm.gamma = bundle.dinv_sqrt.asDiagonal() * gm.psi * bundle.dinv_sqrt.asDiagonal();
    return gm;
}

double cost_hadamard(const GammaMatrix& gm, const KernelBundle& bundle) {
    if (gm.gamma.rows() != bundle.K.rows())
        throw std::invalid_argument("cost_hadamard: size mismatch");
    return (gm.gamma.array() * bundle.K.array()).sum();
}

}  // namespace altclust
