#include "altclust/data_metrics.hpp"

#include "altclust/kernel_hsic.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace altclust;

TEST_CASE("gen_small_gauss: shape, balance, determinism, view independence") {
    const Dataset d = gen_small_gauss(7);
    CHECK(d.X.rows() == 40);
    CHECK(d.X.cols() == 2);
    REQUIRE(d.original_labels.has_value());
    REQUIRE(d.alt_ground_truth.has_value());
    int alt1 = 0, orig1 = 0;
    for (int i = 0; i < 40; ++i) {
        alt1 += (*d.alt_ground_truth)[i];
        orig1 += (*d.original_labels)[i];
        // labels are readable off the coordinates directly
        CHECK((*d.alt_ground_truth)[i] == (d.X(i, 0) > 0 ? 1 : 0));
        CHECK((*d.original_labels)[i] == (d.X(i, 1) > 0 ? 1 : 0));
    }
    CHECK(alt1 == 20);
    CHECK(orig1 == 20);
    CHECK(nmi(*d.original_labels, *d.alt_ground_truth) <= 0.05);

    const Dataset again = gen_small_gauss(7);
    CHECK((d.X - again.X).norm() == 0.0);
    const Dataset other = gen_small_gauss(8);
    CHECK((d.X - other.X).norm() > 1e-8);
}

TEST_CASE("gen_large_gauss shape and view independence") {
    const Dataset d = gen_large_gauss(11);
    CHECK(d.X.rows() == 1000);
    CHECK(d.X.cols() == 4);
    CHECK(nmi(*d.original_labels, *d.alt_ground_truth) <= 0.05);
}

TEST_CASE("gen_moons: shapes, separation, view independence") {
    const Dataset m = gen_moons(13, false);
    CHECK(m.X.rows() == 400);
    CHECK(m.X.cols() == 4);
    CHECK(nmi(*m.original_labels, *m.alt_ground_truth) <= 0.05);

    // the two parabolic branches stay apart even with jitter
    double min_gap = 1e9;
    for (int i = 0; i < 400; ++i)
        for (int j = 0; j < 400; ++j) {
            if ((*m.alt_ground_truth)[i] == (*m.alt_ground_truth)[j]) continue;
            min_gap = std::min(min_gap, (m.X.row(i).head(2) - m.X.row(j).head(2)).norm());
        }
    CHECK(min_gap > 0.05);

    const Dataset big = gen_moons(13, true);
    CHECK(big.X.rows() == 1000);
    CHECK(big.X.cols() == 7);
}

TEST_CASE("preprocess_center_scale") {
    Matrix X(4, 3);
    X << 0, 5, 1, 2, 5, 1, 0, 5, 3, 2, 5, 3;
    std::vector<int> constant;
    const Matrix Z = preprocess_center_scale(X, &constant);
    CHECK(constant == std::vector<int>{1});
    for (Eigen::Index c : {0, 2}) {
        CHECK(Z.col(c).sum() == doctest::Approx(0).epsilon(1e-14));
        CHECK(Z.col(c).squaredNorm() / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(Z.col(1).norm() == 0.0);
    // hand values: col 0 in {0,2} -> mean 1, pop std 1 -> {-1, 1}
    CHECK(Z(0, 0) == doctest::Approx(-1.0));
    CHECK(Z(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("pca_reduce keeps enough variance and is orthonormal") {
    Matrix X = oracle::random_matrix(30, 3, 700);
    Matrix wide(30, 6);
    wide << X, X;  // rank 3 by construction
    const Matrix Y = pca_reduce(wide, 0.999);
    CHECK(Y.cols() <= 3);
    // a strict cutoff keeps only the dominant direction
    Matrix aniso = X;
    aniso.col(0) *= 100.0;
    const Matrix Y1 = pca_reduce(aniso, 0.9);
    CHECK(Y1.cols() == 1);
    CHECK_THROWS_AS(pca_reduce(X, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pca_reduce(X, 1.5), std::invalid_argument);
}

TEST_CASE("nmi: hand cases and contingency oracle") {
    const std::vector<int> a{0, 0, 1, 1};
    const std::vector<int> b{1, 1, 0, 0};
    const std::vector<int> c{0, 1, 0, 1};
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(nmi(a, b) == doctest::Approx(1.0));  // relabeling-invariant
    CHECK(nmi(a, c) == doctest::Approx(0.0).epsilon(1e-12));
    const std::vector<int> single{2, 2, 2};
    CHECK(nmi(single, single) == doctest::Approx(1.0));
    CHECK(nmi(single, std::vector<int>{0, 1, 2}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(nmi(a, single), std::invalid_argument);

    std::mt19937_64 rng(701);
    for (int t = 0; t < 50; ++t) {
        const int n = 5 + static_cast<int>(rng() % 60);
        std::vector<int> u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = static_cast<int>(rng() % (1 + t % 5));
            v[i] = static_cast<int>(rng() % (1 + (t + 2) % 6));
        }
        CHECK(nmi(u, v) == doctest::Approx(oracle::nmi_contingency(u, v)).epsilon(1e-10));
    }
}

TEST_CASE("csv round trip preserves doubles bit-for-bit") {
    Dataset d = gen_small_gauss(3);
    const std::string path = "rt_small.csv";
    save_csv(d, path);
    const Dataset back = load_csv(path);
    CHECK((d.X - back.X).norm() == 0.0);
    REQUIRE(back.original_labels.has_value());
    REQUIRE(back.alt_ground_truth.has_value());
    CHECK(*back.original_labels == *d.original_labels);
    CHECK(*back.alt_ground_truth == *d.alt_ground_truth);
    std::remove(path.c_str());

    // one-label variant
    Dataset half = d;
    half.alt_ground_truth.reset();
    save_csv(half, path);
    const Dataset back1 = load_csv(path);
    CHECK(!back1.alt_ground_truth.has_value());
    CHECK(*back1.original_labels == *d.original_labels);
    std::remove(path.c_str());
}

TEST_CASE("load_csv diagnostics") {
    const std::string path = "bad.csv";
    {
        std::ofstream f(path);
        f << "# labels: last\n1.0,2.0,0\n1.0,2.0\n";
    }
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    {
        std::ofstream f(path);
        f << "# labels: last\n1.0,abc,0\n";
    }
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    {
        std::ofstream f(path);
        f << "# labels: last\n1.0,2.0,0.5\n";
    }
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_csv("no_such_file.csv"), std::runtime_error);
}
