#ifndef ALTCLUST_VERIFY_HPP
#define ALTCLUST_VERIFY_HPP

#include "altclust/objective.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace altclust {

/// Numerical certificate for a candidate fixed point: first-order residuals,
/// the eigengap, the sigma inequality, the full-rank check on Phi, and a
/// sample of second-order directional curvatures.
struct OptimalityReport {
    double stationarity_residual = 0.0;
    double orthonormality_defect = 0.0;
    double eigengap = 0.0;  // min of complement eigenvalues - max of selected
    double sigma_lhs = 0.0;
    double sigma_rhs = 0.0;
    bool sigma_condition_holds = false;
    bool phi_rank_ok = false;
    std::vector<std::pair<std::uint64_t, double>> curvature_samples;  // (seed, value)
    double min_curvature = 0.0;
};

/// values[q] - values[q-1] for an ascending spectrum.
double eigengap(const Vector& values, Eigen::Index q);

/// q in [1, q_max] maximizing the eigengap; ties resolved to the smallest q.
Eigen::Index suggest_q(const Vector& values, Eigen::Index q_max);

struct SigmaCondition {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// lhs = sigma^2 * eigengap of the Phi(W) spectrum at W's q;
/// rhs = Sum_ij (|gamma_ij| / sigma^2) exp(-...) ||x_i - x_j||^4.
SigmaCondition sigma_condition(const WSubproblem& prob, const StiefelPoint& W,
                               const EigenPairs& full_spectrum);

/// Tr(Z^T D grad L [Z]) at (W, Lambda*) along a feasible tangent Z.
double directional_second_order(const WSubproblem& prob, const StiefelPoint& W, const Matrix& Z);

/// Entrywise central differences of f_cost; independent oracle for f_gradient.
Matrix finite_diff_gradient(const WSubproblem& prob, const Matrix& W, double h);

OptimalityReport optimality_report(const WSubproblem& prob, const StiefelPoint& W,
                                   int n_directions, std::uint64_t seed);

}  // namespace altclust

#endif
