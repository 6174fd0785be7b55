#include "altclust/pipeline.hpp"

#include "altclust/data_metrics.hpp"
#include "altclust/kernel_hsic.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

using namespace altclust;

TEST_CASE("labels_to_indicator") {
    const Labels labels{0, 1, 1, 2};
    const Matrix Y = labels_to_indicator(labels, 3);
    CHECK(Y.rows() == 4);
    CHECK(Y.cols() == 3);
    CHECK(Y.sum() == doctest::Approx(4.0));
    CHECK(Y(0, 0) == 1.0);
    CHECK(Y(1, 1) == 1.0);
    CHECK(Y(3, 2) == 1.0);
    CHECK(Y(0, 1) == 0.0);
    CHECK_THROWS_AS(labels_to_indicator(labels, 2), std::invalid_argument);
    CHECK_THROWS_AS(labels_to_indicator(Labels{-1, 0}, 2), std::invalid_argument);
}

TEST_CASE("update_u recovers a two-block structure") {
    // two tight clusters in projected space -> spectral embedding separates them
    Matrix P(4, 1);
    P << 0.0, 0.01, 5.0, 5.01;
    KernelBundle kb = gaussian_kernel(P, Matrix::Identity(1, 1), 1.0);
    const Matrix U = update_u(normalize_kernel(kb), 2);
    CHECK(U.rows() == 4);
    CHECK(U.cols() == 2);
    CHECK(orthonormality_defect(U) <= 1e-10);
    // the leading eigenvector separates the blocks; clustering the rows
    // recovers them exactly
    const Labels blocks = kmeans(U, 2, 3, 4);
    CHECK(blocks[0] == blocks[1]);
    CHECK(blocks[2] == blocks[3]);
    CHECK(blocks[0] != blocks[2]);
}

TEST_CASE("kmeans: hand-checkable 1-d case") {
    Matrix pts(4, 1);
    pts << 0.0, 0.2, 10.0, 10.2;
    const Labels labels = kmeans(pts, 2, 5, 8);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[0] != labels[2]);
    const Labels labels2 = kmeans(pts, 2, 5, 8);
    CHECK(labels == labels2);
    CHECK_THROWS_AS(kmeans(pts, 0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(pts, 5, 1, 1), std::invalid_argument);
}

TEST_CASE("kdac_run on small gaussians finds the alternative view") {
    const Dataset d = gen_small_gauss(21);
    KdacConfig cfg;
    cfg.sigma = 1.0;
    cfg.lambda_weight = 0.04;
    cfg.q = 1;
    cfg.k = 2;
    cfg.curvature_directions = 10;
    cfg.master_max_iter = 100;  // the default cap of 20 flags non-convergence
    const KdacResult r = kdac_run(d.X, *d.original_labels, cfg, &d);
    CHECK(r.labels.size() == 40);
    CHECK(r.W.W.rows() == 2);
    CHECK(r.W.W.cols() == 1);
    CHECK(orthonormality_defect(r.W.W) <= 1e-8);
    REQUIRE(r.metrics.nmi_vs_truth.has_value());
    CHECK(*r.metrics.nmi_vs_truth >= 0.95);
    REQUIRE(r.metrics.novelty.has_value());
    CHECK(*r.metrics.novelty <= 0.05);
    CHECK(r.report.stationarity_residual <= 1e-6);
    CHECK(r.converged);
    // the discovered projection is the alternative axis, not the original one
    CHECK(std::abs(r.W.W(0, 0)) > 0.9);

    const KdacResult again = kdac_run(d.X, *d.original_labels, cfg, &d);
    CHECK((r.W.W - again.W.W).norm() == 0.0);
    CHECK(r.labels == again.labels);
}

TEST_CASE("evaluate computes CQ against the centered normalized kernel") {
    const Dataset d = gen_small_gauss(22);
    KdacConfig cfg;
    cfg.sigma = 1.0;
    cfg.lambda_weight = 0.04;
    cfg.q = 1;
    cfg.k = 2;
    cfg.curvature_directions = 0;
    const KdacResult r = kdac_run(d.X, *d.original_labels, cfg, &d);
    const KernelBundle kb = gaussian_kernel(d.X, r.W.W, cfg.sigma);
    const Matrix Kc = center_bilateral(normalize_kernel(kb));
    const double cq_ref = (Kc.array() * (r.U * r.U.transpose()).array()).sum();
    CHECK(r.metrics.clustering_quality == doctest::Approx(cq_ref).epsilon(1e-10));
    const double n1 = static_cast<double>(d.X.rows()) - 1.0;
    CHECK(r.metrics.clustering_quality_normalized ==
          doctest::Approx(cq_ref / (n1 * n1)).epsilon(1e-10));
}

TEST_CASE("grid_search: single cell reproduces a direct run; selection prefers certificates") {
    const Dataset d = gen_small_gauss(23);
    KdacConfig base;
    base.k = 2;
    base.q = 1;
    base.seed = 5;
    const GridSearchResult g = grid_search(d.X, *d.original_labels, {1.0}, {0.04}, {1}, base);
    REQUIRE(g.log.size() == 1);
    CHECK(g.best.sigma == 1.0);
    CHECK(g.best.lambda_weight == 0.04);

    KdacConfig direct = base;
    direct.sigma = 1.0;
    direct.lambda_weight = 0.04;
    direct.curvature_directions = 0;
    const KdacResult ref = kdac_run(d.X, *d.original_labels, direct, &d);
    CHECK(g.log[0].cq == doctest::Approx(ref.metrics.clustering_quality).epsilon(1e-10));
    CHECK(g.log[0].holds == ref.report.sigma_condition_holds);

    const GridSearchResult g2 =
        grid_search(d.X, *d.original_labels, {0.05, 1.0}, {0.04}, {1}, base);
    REQUIRE(g2.log.size() == 2);
    bool any_holds = false;
    bool winner_holds = false;
    for (const auto& c : g2.log) {
        any_holds = any_holds || c.holds;
        if (c.sigma == g2.best.sigma && c.lambda_weight == g2.best.lambda_weight)
            winner_holds = c.holds;
    }
    // if any cell certifies, the winner must certify
    if (any_holds) CHECK(winner_holds);

    CHECK_THROWS_AS(grid_search(d.X, *d.original_labels, {}, {0.04}, {1}, base),
                    std::invalid_argument);
}

TEST_CASE("master trace is recorded and objective stabilizes") {
    const Dataset d = gen_small_gauss(24);
    KdacConfig cfg;
    cfg.sigma = 1.0;
    cfg.lambda_weight = 0.04;
    cfg.q = 1;
    cfg.k = 2;
    cfg.curvature_directions = 0;
    cfg.master_max_iter = 100;
    const KdacResult r = kdac_run(d.X, *d.original_labels, cfg, &d);
    REQUIRE(!r.master_trace.empty());
    CHECK(r.master_trace.back().w_step <= cfg.master_tol);
    CHECK(r.master_trace.back().u_step <= cfg.master_tol);
    CHECK(r.metrics.iterations == r.total_solver_iterations);
    CHECK(r.metrics.wall_time_s >= 0.0);
}
