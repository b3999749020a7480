#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tpcc/complex.hpp"

namespace tpcc {

/// Per dimension k, one cluster label per k-simplex (0 = trivial cluster).
using SimplexLabels = std::vector<std::vector<int>>;

/// One row per point. Columns are grouped by dimension (k = 0..d) and, inside a
/// dimension, by cluster id 0..cluster_count[k]. Entry (k, c) is the fraction of the
/// point's k-simplices labelled c; a block is all zero when the point has none.
struct SignatureTable {
    Eigen::MatrixXd rows;
    std::vector<int> cluster_count;
    /// First column of each dimension block.
    std::vector<Eigen::Index> block_offset;
};

/// `cluster_count[k]` is the number of non-trivial clusters of dimension k; labels
/// must lie in 0..cluster_count[k].
SignatureTable signatures(const SimplicialComplex& sc, const SimplexLabels& labels,
                          const std::vector<int>& cluster_count);

enum class FinalMethod { kKMeans, kSpectral };

/// k-means (k-means++ seeding, 20 restarts) or spectral clustering of the signature rows.
std::vector<int> final_cluster(const SignatureTable& table, int k_final, std::uint64_t seed,
                               FinalMethod method = FinalMethod::kKMeans);

/// Hubert-Arabie adjusted Rand index. Two single-cluster partitions give 1.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace tpcc
