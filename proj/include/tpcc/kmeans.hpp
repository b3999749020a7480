#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace tpcc {

struct KMeansResult {
    std::vector<int> labels;
    Eigen::MatrixXd centers;
    double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding, best of `restarts` by inertia.
///
/// Rows of `data` are the samples. Labels are renumbered 0..k-1 in order of first
/// appearance, so equal partitions give equal label vectors.
KMeansResult kmeans(const Eigen::MatrixXd& data, int k, int restarts, std::uint64_t seed,
                    int max_iterations = 300);

/// Renumbers labels 0, 1, ... in order of first appearance.
std::vector<int> canonical_labels(const std::vector<int>& labels);

}  // namespace tpcc
