#include "altclust/pipeline.hpp"

#include "altclust/detail/parallel.hpp"
#include "altclust/detail/rng.hpp"
#include "altclust/kernel_hsic.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace altclust {

namespace {

using detail::mix_seed;
using detail::uniform01;

Labels assign_to_nearest(const Matrix& rows, const Matrix& centers) {
    Labels out(rows.rows());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < centers.rows(); ++c) {
            const double d = (rows.row(i) - centers.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        out[i] = arg;
    }
    return out;
}

double inertia(const Matrix& rows, const Matrix& centers, const Labels& labels) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        s += (rows.row(i) - centers.row(labels[i])).squaredNorm();
    return s;
}

Labels kmeans_single(const Matrix& rows, int k, std::uint64_t seed, double* out_inertia) {
    const Eigen::Index n = rows.rows();
    std::mt19937_64 rng(seed);
    Matrix centers(k, rows.cols());

    // k-means++ seeding
    centers.row(0) = rows.row(static_cast<Eigen::Index>(uniform01(rng) * n) % n);
    Vector d2(n);
    for (int c = 1; c < k; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int p = 0; p < c; ++p)
                best = std::min(best, (rows.row(i) - centers.row(p)).squaredNorm());
            d2[i] = best;
        }
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = uniform01(rng) * total, acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(uniform01(rng) * n) % n;
        }
        centers.row(c) = rows.row(pick);
    }

    Labels labels = assign_to_nearest(rows, centers);
    for (int iter = 0; iter < 300; ++iter) {
        Matrix sums = Matrix::Zero(k, rows.cols());
        std::vector<int> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[i]) += rows.row(i);
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
        Labels next = assign_to_nearest(rows, centers);
        const bool stable = next == labels;
        labels = std::move(next);
        if (stable) break;
    }
    if (out_inertia) *out_inertia = inertia(rows, centers, labels);
    return labels;
}

Matrix orthonormal_indicator(const Labels& labels, int k) {
    Matrix U = labels_to_indicator(labels, k);
    for (int c = 0; c < k; ++c) {
        const double nrm = U.col(c).norm();
        if (nrm > 0.0) U.col(c) /= nrm;
    }
    return U;
}

}  // namespace

Matrix labels_to_indicator(const Labels& labels, int k) {
    Matrix Y = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k)
            throw std::invalid_argument("labels_to_indicator: label out of range at row " +
                                        std::to_string(i));
        Y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return Y;
}

Matrix update_u(const Matrix& k_normalized, int k) {
    return eig_max(center_bilateral(k_normalized), k).W;
}

Labels kmeans(const Matrix& rows, int k, std::uint64_t seed, int restarts) {
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (rows.rows() < k) throw std::invalid_argument("kmeans: fewer samples than clusters");
    if (restarts < 1) restarts = 1;
    Labels best;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        double in = 0.0;
        Labels l = kmeans_single(rows, k, mix_seed(seed, static_cast<std::uint64_t>(r)), &in);
        if (in < best_inertia) {
            best_inertia = in;
            best = std::move(l);
        }
    }
    return best;
}

KdacResult kdac_run(const Matrix& X, const Labels& original_labels, const KdacConfig& cfg,
                    const Dataset* dataset_for_metrics) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n = X.rows(), d = X.cols();
    if (static_cast<Eigen::Index>(original_labels.size()) != n)
        throw std::invalid_argument("kdac_run: label length mismatch");
    if (cfg.k < 2) throw std::invalid_argument("kdac_run: k must be >= 2");
    if (cfg.q < 1 || cfg.q > d) throw std::invalid_argument("kdac_run: q out of range");

    const Matrix Y = labels_to_indicator(original_labels, cfg.k);
    Matrix U = orthonormal_indicator(original_labels, cfg.k);

    // The initial gamma needs a degree vector before any W exists; the
    // full-data kernel (W = I) provides it.
    KernelBundle b0 = gaussian_kernel(X, Matrix::Identity(d, d), cfg.sigma);
    GammaMatrix gm0 = gamma_matrix(U, Y, cfg.lambda_weight, b0);
    WSubproblem prob0(X, gm0.psi, b0.dinv_sqrt, cfg.sigma, cfg.q);
    StiefelPoint W = cfg.init == InitScheme::SpectralInit ? spectral_init(prob0)
                                                         : random_init(d, cfg.q, cfg.seed);

    KdacResult res;
    bool have_final_prob = false;
    Matrix final_psi;
    Vector final_dinv;

    for (int m = 1; m <= cfg.master_max_iter; ++m) {
        KernelBundle bundle = gaussian_kernel(X, W.W, cfg.sigma);  // D update
        GammaMatrix gm = gamma_matrix(U, Y, cfg.lambda_weight, bundle);
        WSubproblem prob(X, gm.psi, bundle.dinv_sqrt, cfg.sigma, cfg.q);

        SolveResult sr = solve(prob, W, cfg.solver);
        KernelBundle bundle_w = gaussian_kernel(X, sr.W.W, cfg.sigma);
        Matrix U_next = update_u(normalize_kernel(bundle_w), cfg.k);

        MasterRecord rec;
        rec.iteration = m;
        rec.objective = f_cost(prob, sr.W.W);
        rec.w_step = subspace_distance(W.W, sr.W.W);
        rec.u_step = subspace_distance(U, U_next);
        rec.solver_converged = sr.trace.converged;
        res.master_trace.push_back(rec);
        res.total_solver_iterations += sr.trace.iterations;
        res.last_solve_trace = sr.trace;

        W = std::move(sr.W);
        U = std::move(U_next);
        final_psi = gm.psi;
        final_dinv = bundle.dinv_sqrt;
        have_final_prob = true;

        if (rec.w_step <= cfg.master_tol && rec.u_step <= cfg.master_tol) {
            res.converged = true;
            break;
        }
    }
    if (!have_final_prob) throw std::logic_error("kdac_run: master loop did not execute");

    res.W = W;
    res.U = U;
    res.labels = kmeans(U, cfg.k, mix_seed(cfg.seed, 0xA17C), cfg.kmeans_restarts);

    // Certificate against the subproblem the final W actually solved: the
    // fixed-point conditions of Lemma 2 are statements about that frozen
    // gamma, not about a gamma rebuilt from the post-solve U.
    {
        WSubproblem prob(X, final_psi, final_dinv, cfg.sigma, cfg.q);
        if (!res.W.eigenvalues) {
            const Matrix phi = phi_matrix(prob, res.W.W);
            res.W.eigenvalues = (res.W.W.transpose() * phi * res.W.W).diagonal();
        }
        res.report =
            optimality_report(prob, res.W, cfg.curvature_directions, mix_seed(cfg.seed, 0xD1));
        res.phi_spectrum = sym_eig_full(phi_matrix(prob, res.W.W)).values;
    }

    Dataset fallback;
    if (!dataset_for_metrics) {
        fallback.X = X;
        fallback.original_labels = original_labels;
    }
    const Dataset& ds = dataset_for_metrics ? *dataset_for_metrics : fallback;
    res.metrics = evaluate(res, X, ds, cfg);
    res.metrics.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.metrics.iterations = res.total_solver_iterations;
    return res;
}

MetricsReport evaluate(const KdacResult& result, const Matrix& X_preprocessed,
                       const Dataset& dataset, const KdacConfig& cfg) {
    MetricsReport m;
    if (dataset.alt_ground_truth) m.nmi_vs_truth = nmi(result.labels, *dataset.alt_ground_truth);
    if (dataset.original_labels) m.novelty = nmi(result.labels, *dataset.original_labels);

    const double n = static_cast<double>(X_preprocessed.rows());
    const KernelBundle bundle = gaussian_kernel(X_preprocessed, result.W.W, cfg.sigma);
    const Matrix Kn = normalize_kernel(bundle);
    const Matrix Q = center_bilateral(Kn);
    // CQ = Tr(K_norm H U U^T H) in the unnormalized Table-1 scaling; the
    // 1/(n-1)^2 HSIC convention is reported alongside.
    m.clustering_quality = (Q.array() * (result.U * result.U.transpose()).array()).sum();
    m.clustering_quality_normalized = m.clustering_quality / ((n - 1.0) * (n - 1.0));

    if (dataset.original_labels) {
        const Matrix Y = labels_to_indicator(*dataset.original_labels, cfg.k);
        const double hsic_y = (Q.array() * (Y * Y.transpose()).array()).sum();
        m.objective_cost = -(m.clustering_quality - cfg.lambda_weight * hsic_y);
    } else {
        m.objective_cost = -m.clustering_quality;
    }
    return m;
}

GridSearchResult grid_search(const Matrix& X, const Labels& original_labels,
                             const std::vector<double>& sigma_grid,
                             const std::vector<double>& lambda_grid,
                             const std::vector<Eigen::Index>& q_candidates,
                             const KdacConfig& base) {
    if (sigma_grid.empty() || lambda_grid.empty())
        throw std::invalid_argument("grid_search: empty grid");
    struct CellEval {
        GridCell cell;
        Vector spectrum;
    };
    std::vector<std::pair<double, double>> cells;
    for (double s : sigma_grid)
        for (double l : lambda_grid) cells.emplace_back(s, l);

    std::vector<CellEval> evals(cells.size());
    detail::parallel_for(cells.size(), [&](std::size_t i) {
        KdacConfig cfg = base;
        cfg.sigma = cells[i].first;
        cfg.lambda_weight = cells[i].second;
        cfg.curvature_directions = 0;  // second-order sampling is not ranked on
        const KdacResult r = kdac_run(X, original_labels, cfg);
        CellEval e;
        e.cell.sigma = cfg.sigma;
        e.cell.lambda_weight = cfg.lambda_weight;
        e.cell.q = cfg.q;
        e.cell.cq = r.metrics.clustering_quality;
        e.cell.sigma_lhs = r.report.sigma_lhs;
        e.cell.sigma_rhs = r.report.sigma_rhs;
        e.cell.holds = r.report.sigma_condition_holds;
        e.spectrum = r.phi_spectrum;
        evals[i] = std::move(e);
    });

    GridSearchResult out;
    out.best = base;
    const CellEval* best = nullptr;
    for (const auto& e : evals) {
        out.log.push_back(e.cell);
        if (!best) {
            best = &e;
            continue;
        }
        if (e.cell.holds != best->cell.holds) {
            if (e.cell.holds) best = &e;
            continue;
        }
        if (e.cell.holds) {
            if (e.cell.cq > best->cell.cq) best = &e;
        } else {
            const double deficit_e = std::abs(e.cell.sigma_lhs - e.cell.sigma_rhs);
            const double deficit_b = std::abs(best->cell.sigma_lhs - best->cell.sigma_rhs);
            if (e.cell.cq > best->cell.cq ||
                (e.cell.cq == best->cell.cq && deficit_e < deficit_b))
                best = &e;
        }
    }
    out.best.sigma = best->cell.sigma;
    out.best.lambda_weight = best->cell.lambda_weight;

    if (!best->cell.holds && !q_candidates.empty() && best->spectrum.size() > 1) {
        // Refine q by the eigengap of the final Phi spectrum.
        Eigen::Index best_q = out.best.q;
        double best_gap = -std::numeric_limits<double>::infinity();
        for (Eigen::Index q : q_candidates) {
            if (q < 1 || q >= best->spectrum.size()) continue;
            const double gap = eigengap(best->spectrum, q);
            if (gap > best_gap) {
                best_gap = gap;
                best_q = q;
            }
        }
        out.best.q = best_q;
    }
    return out;
}

}  // namespace altclust
