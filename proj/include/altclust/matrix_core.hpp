#ifndef ALTCLUST_MATRIX_CORE_HPP
#define ALTCLUST_MATRIX_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

namespace altclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A point on the Stiefel manifold: a d x q matrix with orthonormal columns.
/// When produced by an eigensolve, the eigenvalues paired with the columns
/// are attached (ascending for smallest-q selection, descending for largest-k).
struct StiefelPoint {
    Matrix W;
    std::optional<Vector> eigenvalues;

    Eigen::Index dim() const { return W.rows(); }
    Eigen::Index rank() const { return W.cols(); }
};

/// Full spectral decomposition of a symmetric matrix.
/// values ascending; vectors column j pairs with values[j]; each column's
/// first component of magnitude > 1e-12 is made positive so output is
/// deterministic.
struct EigenPairs {
    Vector values;
    Matrix vectors;
};

EigenPairs sym_eig_full(const Matrix& M);

/// Columns for the q algebraically smallest eigenvalues, ascending.
StiefelPoint eig_min(const Matrix& M, Eigen::Index q);

/// Columns for the k algebraically largest eigenvalues, descending.
StiefelPoint eig_max(const Matrix& M, Eigen::Index k);

/// ||W^T W - I||_F
double orthonormality_defect(const Matrix& W);

/// ||W1 W1^T - W2 W2^T||_F; invariant under column sign flips and
/// permutations, so safe as a convergence test across eigensolves.
/// Both arguments must be column-orthonormal within 1e-6.
double subspace_distance(const Matrix& W1, const Matrix& W2);

/// H M H with H = I - (1/n) 1 1^T, computed by row/column mean subtraction
/// without forming H.
Matrix center_bilateral(const Matrix& M);

/// Random unit-Frobenius-norm Z with Z^T W + W^T Z = 0, built as
/// Z = W A + (I - W W^T) B with A skew-symmetric. Deterministic per seed.
Matrix random_feasible_tangent(const StiefelPoint& W, std::uint64_t seed);

}  // namespace altclust

#endif
