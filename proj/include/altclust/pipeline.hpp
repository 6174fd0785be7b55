#ifndef ALTCLUST_PIPELINE_HPP
#define ALTCLUST_PIPELINE_HPP

#include "altclust/data_metrics.hpp"
#include "altclust/optimizers.hpp"
#include "altclust/verify.hpp"

#include <string>
#include <vector>

namespace altclust {

enum class InitScheme { SpectralInit, Random };

struct KdacConfig {
    double sigma = 1.0;
    double lambda_weight = 1.0;
    Eigen::Index q = 1;
    int k = 2;
    SolverConfig solver;
    InitScheme init = InitScheme::SpectralInit;
    std::uint64_t seed = 0;  // drives random init, k-means and curvature directions
    int master_max_iter = 20;
    double master_tol = 1e-4;
    int kmeans_restarts = 10;
    int curvature_directions = 100;
};

struct MasterRecord {
    int iteration = 0;
    double objective = 0.0;  // F(W) at the accepted W of this master iteration
    double w_step = 0.0;     // subspace change of W vs previous master iteration
    double u_step = 0.0;
    bool solver_converged = true;
};

struct KdacResult {
    Matrix U;
    StiefelPoint W;
    Labels labels;
    OptimalityReport report;
    MetricsReport metrics;
    Vector phi_spectrum;  // full spectrum of Phi(W*) at the final state
    std::vector<MasterRecord> master_trace;
    SolveTrace last_solve_trace;
    bool converged = false;
    int total_solver_iterations = 0;
};

/// 0/1 indicator with exactly one 1 per row.
Matrix labels_to_indicator(const Labels& labels, int k);

/// Top-k eigenvectors of H K_normalized H: the spectral embedding.
Matrix update_u(const Matrix& k_normalized, int k);

/// Lloyd's algorithm with k-means++ seeding; best inertia over `restarts`
/// seeded runs. Deterministic per seed.
Labels kmeans(const Matrix& rows, int k, std::uint64_t seed, int restarts);

/// Alternating minimization over D, W, U (the KDAC master loop), followed by
/// k-means discretization of U and a full optimality report at the final W.
/// X must already be preprocessed (centered/scaled).
KdacResult kdac_run(const Matrix& X, const Labels& original_labels, const KdacConfig& cfg,
                    const Dataset* dataset_for_metrics = nullptr);

struct GridCell {
    double sigma = 0.0;
    double lambda_weight = 0.0;
    Eigen::Index q = 0;
    double cq = 0.0;
    double sigma_lhs = 0.0;
    double sigma_rhs = 0.0;
    bool holds = false;
};

struct GridSearchResult {
    KdacConfig best;
    std::vector<GridCell> log;
};

/// Grid search over (sigma, lambda): rank sigma-condition-satisfying cells by
/// CQ; if none satisfies, rank by CQ then by |lhs - rhs| deficit, and refine
/// q by the eigengap over q_candidates.
GridSearchResult grid_search(const Matrix& X, const Labels& original_labels,
                             const std::vector<double>& sigma_grid,
                             const std::vector<double>& lambda_grid,
                             const std::vector<Eigen::Index>& q_candidates,
                             const KdacConfig& base);

/// Metric report for a finished run; NMI fields are absent when the dataset
/// lacks the corresponding labels.
MetricsReport evaluate(const KdacResult& result, const Matrix& X_preprocessed,
                       const Dataset& dataset, const KdacConfig& cfg);

}  // namespace altclust

#endif
