#ifndef ALTCLUST_DATA_METRICS_HPP
#define ALTCLUST_DATA_METRICS_HPP

#include "altclust/matrix_core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace altclust {

using Labels = std::vector<int>;

struct Dataset {
    Matrix X;
    std::optional<Labels> original_labels;   // the given clustering
    std::optional<Labels> alt_ground_truth;  // the clustering to discover
    std::string name;
};

struct MetricsReport {
    std::optional<double> nmi_vs_truth;  // absent when no ground truth exists
    std::optional<double> novelty;       // NMI vs original labels; lower is better
    double clustering_quality = 0.0;     // Tr(K_norm H U U^T H), Table-1 scaling
    double clustering_quality_normalized = 0.0;  // same / (n-1)^2
    double objective_cost = 0.0;  // -[HSIC(XW,U) - lambda HSIC(XW,Y)], unnormalized scaling
    double wall_time_s = 0.0;
    int iterations = 0;
};

/// Four Gaussian blobs, 40 samples, 2 features; blobs sit on a 2x2 grid so
/// each axis projection yields a perfect 2-clustering. Original labels come
/// from feature 1, the alternative ground truth from feature 0.
Dataset gen_small_gauss(std::uint64_t seed);

/// Four Gaussian blobs, 1000 samples, 4 features: a 2x2 blob grid embedded in
/// 3D via a 45-degree rotation plus one uniform-noise dimension.
Dataset gen_large_gauss(std::uint64_t seed);

/// Two intertwined parabolas in dims 0-1 and two Gaussian clusters in
/// dims 2-3. with_noise adds three uniform dims and grows n to 1000;
/// otherwise n = 400, d = 4. Original labels follow the Gaussian view,
/// the alternative ground truth follows the parabola view.
Dataset gen_moons(std::uint64_t seed, bool with_noise);

/// Columns centered to mean 0 and scaled to population variance 1; constant
/// columns become zero (reported through the optional flag vector).
Matrix preprocess_center_scale(const Matrix& X, std::vector<int>* constant_columns = nullptr);

/// Projection onto the leading principal components whose cumulative
/// explained variance first reaches variance_kept.
Matrix pca_reduce(const Matrix& X, double variance_kept);

/// NMI(a,b) = I(a,b) / sqrt(H(a) H(b)), entropies in nats. Defined as 0 for
/// zero-entropy partitions unless both are the identical single cluster.
double nmi(const Labels& a, const Labels& b);

/// CSV with one sample per row; optional first line "# labels: last" (one
/// trailing integer label column) or "# labels: last2" (original label then
/// alternative ground truth).
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& ds, const std::string& path);

}  // namespace altclust

#endif
