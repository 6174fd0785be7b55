#include "altclust/matrix_core.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace altclust {

namespace {

void check_symmetric_finite(const Matrix& M) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("sym_eig: matrix is not square");
    if (!M.allFinite())
        throw std::invalid_argument("sym_eig: matrix has non-finite entries");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * scale)
        throw std::invalid_argument("sym_eig: matrix is not symmetric (relative asymmetry " +
                                    std::to_string(asym / scale) + ")");
}

// Leading nonzero component of each column made positive.
void normalize_signs(Matrix& V) {
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            const double v = V(i, j);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) V.col(j) = -V.col(j);
                break;
            }
        }
    }
}

}  // namespace

EigenPairs sym_eig_full(const Matrix& M) {
    check_symmetric_finite(M);
    // Symmetrize so roundoff asymmetry cannot leak into the solve.
    const Matrix S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eig: eigensolver failed to converge");
    EigenPairs out{es.eigenvalues(), es.eigenvectors()};
    normalize_signs(out.vectors);
    return out;
}

StiefelPoint eig_min(const Matrix& M, Eigen::Index q) {
    if (q < 1 || q > M.rows())
        throw std::invalid_argument("eig_min: q out of range");
    const EigenPairs ep = sym_eig_full(M);
    StiefelPoint p;
    p.W = ep.vectors.leftCols(q);
    p.eigenvalues = ep.values.head(q);
    return p;
}

StiefelPoint eig_max(const Matrix& M, Eigen::Index k) {
    if (k < 1 || k > M.rows())
        throw std::invalid_argument("eig_max: k out of range");
    const EigenPairs ep = sym_eig_full(M);
    StiefelPoint p;
    p.W = ep.vectors.rightCols(k).rowwise().reverse();
    p.eigenvalues = ep.values.tail(k).reverse();
    return p;
}

double orthonormality_defect(const Matrix& W) {
    const Eigen::Index q = W.cols();
    return (W.transpose() * W - Matrix::Identity(q, q)).norm();
}

double subspace_distance(const Matrix& W1, const Matrix& W2) {
    if (W1.rows() != W2.rows() || W1.cols() != W2.cols())
        throw std::invalid_argument("subspace_distance: shape mismatch");
    if (orthonormality_defect(W1) > 1e-6 || orthonormality_defect(W2) > 1e-6)
        throw std::invalid_argument("subspace_distance: inputs must be column-orthonormal");
    // ||P1 - P2||_F^2 = 2q - 2 ||W1^T W2||_F^2
    const double q = static_cast<double>(W1.cols());
    const double cross = (W1.transpose() * W2).squaredNorm();
    return std::sqrt(std::max(0.0, 2.0 * q - 2.0 * cross));
}

Matrix center_bilateral(const Matrix& M) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("center_bilateral: matrix must be square");
    const Vector row_means = M.rowwise().mean();
    const Vector col_means = M.colwise().mean();
    const double grand = M.mean();
    Matrix C = M;
    C.colwise() -= row_means;
    C.rowwise() -= col_means.transpose();
    C.array() += grand;
    return C;
}

Matrix random_feasible_tangent(const StiefelPoint& W, std::uint64_t seed) {
    const Eigen::Index d = W.dim(), q = W.rank();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Matrix A(q, q), B(d, q);
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index i = 0; i < q; ++i) A(i, j) = gauss(rng);
        for (Eigen::Index j = 0; j < q; ++j)
            for (Eigen::Index i = 0; i < d; ++i) B(i, j) = gauss(rng);
        const Matrix skew = 0.5 * (A - A.transpose());
        Matrix Z = W.W * skew + B - W.W * (W.W.transpose() * B);
        const double nrm = Z.norm();
        if (nrm > 1e-12) return Z / nrm;
    }
    throw std::runtime_error("random_feasible_tangent: degenerate draws exhausted retries");
}

}  // namespace altclust
