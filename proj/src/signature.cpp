#include "tpcc/signature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "tpcc/errors.hpp"
#include "tpcc/kmeans.hpp"

namespace tpcc {

SignatureTable signatures(const SimplicialComplex& sc, const SimplexLabels& labels,
                          const std::vector<int>& cluster_count) {
    if (labels.size() != cluster_count.size()) {
        throw ArgumentError("one cluster count per labelled dimension is required");
    }
    if (static_cast<int>(labels.size()) - 1 > sc.max_dim()) {
        throw ArgumentError("labels given for dimensions the complex does not have");
    }
    SignatureTable table;
    table.cluster_count = cluster_count;
    Eigen::Index width = 0;
    for (int c : cluster_count) {
        if (c < 0) {
            throw ArgumentError("cluster counts must be >= 0");
        }
        table.block_offset.push_back(width);
        width += c + 1;
    }
    const Eigen::Index n = sc.vertex_count();
    table.rows = Eigen::MatrixXd::Zero(n, width);
    Eigen::MatrixXd incident = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const int dim = static_cast<int>(k);
        if (labels[k].size() != sc.count(dim)) {
            throw ArgumentError("dimension " + std::to_string(k) + " has " +
                                std::to_string(sc.count(dim)) + " simplices but " +
                                std::to_string(labels[k].size()) + " labels");
        }
        for (std::size_t s = 0; s < labels[k].size(); ++s) {
            const int c = labels[k][s];
            if (c < 0 || c > cluster_count[k]) {
                throw ArgumentError("simplex of dimension " + std::to_string(k) +
                                    " has missing or out-of-range label " + std::to_string(c));
            }
            for (VertexId v : sc.simplex(dim, s)) {
                table.rows(v, table.block_offset[k] + c) += 1.0;
                incident(v, static_cast<Eigen::Index>(k)) += 1.0;
            }
        }
        for (Eigen::Index v = 0; v < n; ++v) {
            const double total = incident(v, static_cast<Eigen::Index>(k));
            if (total > 0.0) {
                table.rows.row(v).segment(table.block_offset[k], cluster_count[k] + 1) /= total;
            }
        }
    }
    return table;
}

namespace {

std::vector<int> spectral_on_rows(const Eigen::MatrixXd& rows, int k, std::uint64_t seed) {
    // Gaussian affinity with the median pairwise distance as bandwidth
    const Eigen::Index n = rows.rows();
    Eigen::MatrixXd dist(n, n);
    std::vector<double> all;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            dist(i, j) = (rows.row(i) - rows.row(j)).norm();
            if (j > i) {
                all.push_back(dist(i, j));
            }
        }
    }
    double sigma = 1.0;
    if (!all.empty()) {
        auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
        std::nth_element(all.begin(), mid, all.end());
        sigma = *mid > 0.0 ? *mid : 1.0;
    }
    const Eigen::MatrixXd affinity = (-(dist.array().square()) / (2.0 * sigma * sigma)).exp();
    const Eigen::VectorXd degree = affinity.rowwise().sum();
    const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd normalized = Eigen::MatrixXd::Identity(n, n) -
                                       inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized);
    Eigen::MatrixXd embedding = eig.eigenvectors().leftCols(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) {
            embedding.row(i) /= norm;
        }
    }
    return kmeans(embedding, k, 20, seed).labels;
}

}  // namespace

std::vector<int> final_cluster(const SignatureTable& table, int k_final, std::uint64_t seed,
                               FinalMethod method) {
    if (k_final < 1) {
        throw ArgumentError("final cluster count must be >= 1");
    }
    if (k_final > table.rows.rows()) {
        throw ArgumentError("final cluster count " + std::to_string(k_final) + " exceeds the " +
                            std::to_string(table.rows.rows()) + " points");
    }
    if (method == FinalMethod::kSpectral) {
        return spectral_on_rows(table.rows, k_final, seed);
    }
    return kmeans(table.rows, k_final, 20, seed).labels;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw ArgumentError("ARI needs label vectors of equal length");
    }
    const auto n = static_cast<double>(a.size());
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> rows;
    std::map<int, double> cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cells[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto pairs = [](double x) { return 0.5 * x * (x - 1.0); };
    double index = 0.0;
    for (const auto& [key, count] : cells) {
        index += pairs(count);
    }
    double sum_a = 0.0;
    for (const auto& [key, count] : rows) {
        sum_a += pairs(count);
    }
    double sum_b = 0.0;
    for (const auto& [key, count] : cols) {
        sum_b += pairs(count);
    }
    const double total = pairs(n);
    const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
    const double maximum = 0.5 * (sum_a + sum_b);
    if (maximum == expected) {
        return 1.0;
    }
    return (index - expected) / (maximum - expected);
}

}  // namespace tpcc
