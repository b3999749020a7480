#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpcc/complex.hpp"
#include "tpcc/filtration.hpp"
#include "tpcc/pointcloud.hpp"
#include "tpcc/signature.hpp"
#include "tpcc/simplex_clustering.hpp"

namespace tpcc {

struct TpccConfig {
    /// Rips scale; chosen from the persistence diagram when empty.
    std::optional<double> epsilon;
    /// Highest homology dimension used; defaults to min(ambient dimension - 1, 2).
    std::optional<int> max_dim;
    /// Subspace clusters per dimension; missing or non-positive entries mean B_k.
    std::vector<int> clusters_per_dim;
    int final_k = 2;
    FinalMethod final_method = FinalMethod::kKMeans;

    double kernel_tol = 1e-8;
    std::size_t subsample_cap = 2000;
    double trivial_threshold = 0.1;
    std::vector<int> dim_candidates{1, 2};
    int knn = 5;
    int restarts = 10;

    double persistence_fraction = 0.3;
    /// Filtration cut-off for automatic epsilon; defaults to the enclosing radius.
    std::optional<double> max_eps;
    std::size_t simplex_cap = 5'000'000;

    /// Run on this many min-max landmarks and transfer labels by nearest landmark.
    std::optional<Eigen::Index> landmark_count;
    std::uint64_t seed = 0;
};

/// Throws ConfigError for invalid settings.
void validate(const TpccConfig& config);

struct DimensionDiagnostics {
    int dim = 0;
    std::size_t simplex_count = 0;
    int betti = 0;
    /// Bars of the complex's own filtration alive at epsilon.
    int persistence_betti = 0;
    int clusters = 0;
    double kernel_scale = 0.0;
    double kernel_residual = 0.0;
    double next_eigenvalue = 0.0;
    /// The persistence count failed the spectral gap check and was not used.
    bool gap_check_failed = false;
};

struct Diagnostics {
    double epsilon = 0.0;
    /// "given", "persistence" or "fallback".
    std::string epsilon_source;
    /// Points used to choose epsilon (fewer than the input after a capacity retry).
    Eigen::Index epsilon_sample = 0;
    int max_dim = 0;
    Eigen::Index point_count = 0;
    Eigen::Index landmark_count = 0;
    std::vector<DimensionDiagnostics> dims;
    std::vector<std::pair<std::string, double>> timings;

    std::vector<int> betti_numbers() const;
    bool betti_matches_persistence() const;
};

struct TpccResult {
    std::vector<int> labels;
    Diagnostics diagnostics;
    /// Intermediate data of the (landmark) run.
    SimplicialComplex complex{0, 0};
    std::vector<FeatureSpace> features;
    SimplexLabels simplex_labels;
    SignatureTable signatures;
    std::vector<Eigen::Index> landmarks;
};

/// Topological point cloud clustering. Errors are rethrown as StageError.
TpccResult run_tpcc(const PointCloud& cloud, const TpccConfig& config);

/// Smallest r such that some point is within distance r of every point.
double enclosing_radius(const PointCloud& cloud);

/// Spectral clustering with the graph Laplacian of the Rips 1-skeleton at `epsilon`.
std::vector<int> baseline_spectral_vr(const PointCloud& cloud, double epsilon, int k,
                                      std::uint64_t seed);

}  // namespace tpcc
