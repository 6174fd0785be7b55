#include "altclust/data_metrics.hpp"

#include "altclust/detail/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace altclust {

namespace {

using detail::gauss01;
using detail::uniform01;

double entropy_nats(const std::map<int, int>& counts, int n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        (void)label;
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

Dataset gen_small_gauss(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Dataset ds;
    ds.name = "sg";
    const int per_blob = 10;
    const double c = 0.4, std_dev = 0.04;
    ds.X.resize(40, 2);
    Labels orig(40), alt(40);
    int row = 0;
    for (int a = 0; a < 2; ++a) {        // sign of feature 0: alternative view
        for (int b = 0; b < 2; ++b) {    // sign of feature 1: original view
            for (int s = 0; s < per_blob; ++s, ++row) {
                ds.X(row, 0) = c * (2 * a - 1) + std_dev * gauss01(rng);
                ds.X(row, 1) = c * (2 * b - 1) + std_dev * gauss01(rng);
                alt[row] = a;
                orig[row] = b;
            }
        }
    }
    ds.original_labels = orig;
    ds.alt_ground_truth = alt;
    return ds;
}

Dataset gen_large_gauss(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Dataset ds;
    ds.name = "lg";
    const int per_blob = 250;
    const double c = 1.0, std_dev = 0.1;
    const double cos45 = std::sqrt(0.5);
    ds.X.resize(1000, 4);
    Labels orig(1000), alt(1000);
    int row = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int s = 0; s < per_blob; ++s, ++row) {
                const double x = c * (2 * a - 1) + std_dev * gauss01(rng);
                const double y = c * (2 * b - 1) + std_dev * gauss01(rng);
                // 45-degree rotation about the first axis embeds the plane in 3D.
                ds.X(row, 0) = x;
                ds.X(row, 1) = y * cos45;
                ds.X(row, 2) = y * cos45;
                ds.X(row, 3) = uniform01(rng);
                alt[row] = a;
                orig[row] = b;
            }
        }
    }
    ds.original_labels = orig;
    ds.alt_ground_truth = alt;
    return ds;
}

Dataset gen_moons(std::uint64_t seed, bool with_noise) {
    std::mt19937_64 rng(seed);
    Dataset ds;
    ds.name = with_noise ? "moonn" : "moon";
    const int n = with_noise ? 1000 : 400;
    const int d = with_noise ? 7 : 4;
    const int per_curve = n / 4;  // curve positions; each is emitted for both blobs
    const double scale = 0.5, offset = 0.2, jitter = 0.015;
    const double g_center = 0.12, g_std = 0.012;
    ds.X.resize(n, d);
    Labels orig(n), alt(n);
    int row = 0;
    for (int a = 0; a < 2; ++a) {  // parabola membership: alternative view
        for (int s = 0; s < per_curve; ++s) {
            // Stratified curve parameter in [-1, 1] with a small wobble.
            const double t = -1.0 + 2.0 * (s + 0.5) / per_curve + 0.003 * gauss01(rng);
            double px, py;
            if (a == 0) {  // opens down, top arc
                px = t;
                py = 1.0 - t * t;
            } else {       // opens up, shifted right and below
                px = t + 1.0;
                py = t * t - 0.5 - offset;
            }
            // One noise draw per curve position, shared by both Gaussian
            // blobs: the paired design keeps the two views statistically
            // decoupled even at finite n, so the cross-view scatter terms
            // cancel instead of leaving a sampling-noise residue.
            const double j0 = jitter * gauss01(rng), j1 = jitter * gauss01(rng);
            const double n2 = g_std * gauss01(rng), n3 = g_std * gauss01(rng);
            double extras[3] = {0.0, 0.0, 0.0};
            for (int extra = 4; extra < d; ++extra) extras[extra - 4] = uniform01(rng);
            for (int b = 0; b < 2; ++b, ++row) {  // Gaussian membership: original view
                ds.X(row, 0) = scale * px + j0;
                ds.X(row, 1) = scale * py + j1;
                ds.X(row, 2) = g_center * (2 * b - 1) + n2;
                ds.X(row, 3) = g_center * (2 * b - 1) + n3;
                for (int extra = 4; extra < d; ++extra) ds.X(row, extra) = extras[extra - 4];
                alt[row] = a;
                orig[row] = b;
            }
        }
    }
    ds.original_labels = orig;
    ds.alt_ground_truth = alt;
    return ds;
}

Matrix preprocess_center_scale(const Matrix& X, std::vector<int>* constant_columns) {
    const Eigen::Index n = X.rows(), d = X.cols();
    Matrix out(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double mean = X.col(j).mean();
        Vector centered = X.col(j).array() - mean;
        const double var = centered.squaredNorm() / static_cast<double>(n);  // population
        if (var < 1e-24) {
            out.col(j).setZero();
            if (constant_columns) constant_columns->push_back(static_cast<int>(j));
        } else {
            out.col(j) = centered / std::sqrt(var);
        }
    }
    return out;
}

Matrix pca_reduce(const Matrix& X, double variance_kept) {
    if (variance_kept <= 0.0 || variance_kept > 1.0)
        throw std::invalid_argument("pca_reduce: variance_kept must lie in (0, 1]");
    const Eigen::Index n = X.rows();
    Matrix centered = X;
    centered.rowwise() -= X.colwise().mean();
    Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinV);
    const Vector sv = svd.singularValues();
    Vector var = sv.array().square() / static_cast<double>(n);
    const double total = var.sum();
    if (total <= 0.0) return Matrix::Zero(n, 0);
    const double rank_tol = sv.size() > 0 ? sv[0] * 1e-12 : 0.0;
    double cum = 0.0;
    Eigen::Index keep = 0;
    for (Eigen::Index i = 0; i < var.size(); ++i) {
        if (sv[i] <= rank_tol) break;
        ++keep;
        cum += var[i];
        if (cum / total >= variance_kept - 1e-12) break;
    }
    return centered * svd.matrixV().leftCols(keep);
}

double nmi(const Labels& a, const Labels& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("nmi: label vectors differ in length");
    if (a.empty()) throw std::invalid_argument("nmi: empty label vectors");
    const int n = static_cast<int>(a.size());
    std::map<int, int> ca, cb;
    std::map<std::pair<int, int>, int> joint;
    for (int i = 0; i < n; ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[{a[i], b[i]}];
    }
    const double ha = entropy_nats(ca, n), hb = entropy_nats(cb, n);
    if (ha <= 0.0 || hb <= 0.0) {
        // Single-cluster partitions: identical single clusters count as
        // perfect agreement, anything else as no information.
        return (ca.size() == 1 && cb.size() == 1) ? 1.0 : 0.0;
    }
    // Summing in sorted order makes nmi(a, b) == nmi(b, a) bit-exact: the
    // term multiset is swap-invariant, but the map iteration order is not.
    std::vector<double> terms;
    terms.reserve(joint.size());
    for (const auto& [key, c] : joint) {
        const double pij = static_cast<double>(c) / n;
        const double pi = static_cast<double>(ca[key.first]) / n;
        const double pj = static_cast<double>(cb[key.second]) / n;
        terms.push_back(pij * std::log(pij / (pi * pj)));
    }
    std::sort(terms.begin(), terms.end());
    double mi = 0.0;
    for (const double term : terms) mi += term;
    const double v = mi / std::sqrt(ha * hb);
    return std::clamp(v, 0.0, 1.0);
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
    const bool two = ds.original_labels && ds.alt_ground_truth;
    if (two)
        out << "# labels: last2\n";
    else if (ds.original_labels)
        out << "# labels: last\n";
    char buf[64];
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.X(i, j));
            if (j) out << ',';
            out << buf;
        }
        if (ds.original_labels) out << ',' << (*ds.original_labels)[i];
        if (two) out << ',' << (*ds.alt_ground_truth)[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("save_csv: write failed for '" + path + "'");
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");
    std::string line;
    int label_cols = 0;
    std::vector<std::vector<double>> rows;
    std::vector<int> orig, alt;
    int lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("labels: last2") != std::string::npos)
                label_cols = 2;
            else if (line.find("labels: last") != std::string::npos)
                label_cols = 1;
            continue;
        }
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size()) throw std::invalid_argument("trailing junk");
                cells.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("load_csv: non-numeric cell at row " +
                                         std::to_string(lineno) + ", column " +
                                         std::to_string(col));
            }
        }
        if (static_cast<int>(cells.size()) <= label_cols)
            throw std::runtime_error("load_csv: too few columns at row " + std::to_string(lineno));
        if (width == 0) width = cells.size();
        if (cells.size() != width)
            throw std::runtime_error("load_csv: ragged row " + std::to_string(lineno) +
                                     " (expected " + std::to_string(width) + " columns, got " +
                                     std::to_string(cells.size()) + ")");
        for (int l = 0; l < label_cols; ++l) {
            const double v = cells[cells.size() - label_cols + l];
            const int iv = static_cast<int>(std::llround(v));
            if (std::abs(v - iv) > 1e-9 || iv < 0)
                throw std::runtime_error("load_csv: label column out of range at row " +
                                         std::to_string(lineno));
            (l == 0 ? orig : alt).push_back(iv);
        }
        cells.resize(cells.size() - label_cols);
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw std::runtime_error("load_csv: '" + path + "' contains no data rows");
    Dataset ds;
    ds.name = path;
    ds.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    if (label_cols >= 1) ds.original_labels = std::move(orig);
    if (label_cols == 2) ds.alt_ground_truth = std::move(alt);
    return ds;
}

}  // namespace altclust
