#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tpcc/spectral.hpp"

namespace tpcc {

/// Cluster id of simplices with (near-)zero harmonic coordinates.
inline constexpr int kTrivialCluster = 0;
/// Marker for simplices that have not been labelled yet.
inline constexpr int kUnlabeled = -1;

/// One row per k-simplex: its coordinates in the harmonic basis of L_k.
struct FeatureSpace {
    int dim = 0;
    Eigen::MatrixXd rows;
};

FeatureSpace embed(const KernelBasis& basis);

/// min(||u - v||, ||u + v||): harmonic coordinates are defined up to orientation.
double sign_invariant_distance(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                               const Eigen::Ref<const Eigen::RowVectorXd>& v);

struct SubspaceOptions {
    int n_clusters = 1;
    /// Allowed subspace dimensions, each 1 or 2.
    std::vector<int> dim_candidates{1, 2};
    std::size_t subsample_cap = 2000;
    /// Rows shorter than this fraction of the median non-zero row norm are trivial.
    double trivial_threshold = 0.1;
    /// Smallest subspace dimension capturing this share of a cluster's energy wins.
    double variance_captured = 0.95;
    int restarts = 10;
    int max_iterations = 100;
    std::uint64_t seed = 0;
};

/// Linear subspace of cluster c (1-based) is `bases[c - 1]`, orthonormal columns.
struct SubspaceModel {
    std::vector<Eigen::MatrixXd> bases;
    /// Sum of squared distances of the clustered rows to their subspaces.
    double objective = 0.0;
};

struct SubspaceClustering {
    SubspaceModel model;
    /// Per row: kTrivialCluster, a cluster id in 1..n_clusters, or kUnlabeled for
    /// non-trivial rows left out of the subsample.
    std::vector<int> labels;
    std::vector<char> trivial;
};

/// K-subspaces clustering of the non-trivial rows of `fs`.
///
/// Throws ArgumentError when there are fewer non-trivial rows than clusters.
SubspaceClustering cluster_subspaces(const FeatureSpace& fs, const SubspaceOptions& options);

/// Labels every kUnlabeled row by majority vote among its `k_neighbors` nearest
/// labelled rows under the sign-invariant distance. Vote ties go to the smallest id.
std::vector<int> extend_knn(const std::vector<int>& labels, const FeatureSpace& fs,
                            int k_neighbors);

/// cluster_subspaces followed by extend_knn against the clustered subsample.
std::vector<int> label_simplices(const FeatureSpace& fs, const SubspaceOptions& options,
                                 int k_neighbors, SubspaceModel* model = nullptr);

}  // namespace tpcc
