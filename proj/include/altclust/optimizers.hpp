#ifndef ALTCLUST_OPTIMIZERS_HPP
#define ALTCLUST_OPTIMIZERS_HPP

#include "altclust/objective.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace altclust {

enum class SolverMethod { ISM, SM, DG };

SolverMethod solver_method_from_string(const std::string& name);
std::string to_string(SolverMethod m);

struct SolverConfig {
    SolverMethod method = SolverMethod::ISM;
    int max_iter = 1000;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    double sm_step = 1.0;       // initial Armijo step
    double sm_backtrack = 0.5;  // step shrink factor
    double armijo_c = 1e-4;
    int dg_inner_max = 500;     // per-column iteration cap for DG
};

struct IterRecord {
    int iteration = 0;
    double cost = 0.0;
    double residual = 0.0;  // stationarity / Riemannian-gradient residual
    double step = 0.0;      // subspace step between successive iterates
    double wall_s = 0.0;
};

struct SolveTrace {
    std::vector<IterRecord> records;
    bool converged = false;
    bool stalled = false;        // line-search failure / column re-seed
    int iterations = 0;
};

struct SolveResult {
    StiefelPoint W;
    SolveTrace trace;
};

/// Closed-form initializer: eig_min of the Taylor-approximate Phi at W = 0
/// (i.e. phi_matrix evaluated with K identically 1).
StiefelPoint spectral_init(const WSubproblem& prob);

/// Seeded orthonormal d x q start (QR of a Gaussian draw).
StiefelPoint random_init(Eigen::Index d, Eigen::Index q, std::uint64_t seed);

/// Fixed-point iteration W <- eig_min(Phi(W), q); converges when the
/// subspace distance between successive iterates drops below cfg.tol.
SolveResult ism_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg);

/// Projected gradient descent on the Stiefel manifold: Riemannian gradient
/// G - W sym(W^T G), Armijo backtracking, QR retraction.
SolveResult sm_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg);

/// Dimension growth: columns optimized one at a time by gradient descent,
/// each step projected onto the orthogonal complement of the fixed columns
/// and renormalized.
SolveResult dg_solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg);

SolveResult solve(const WSubproblem& prob, const StiefelPoint& W0, const SolverConfig& cfg);

}  // namespace altclust

#endif
