#include "tpcc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "tpcc/errors.hpp"
#include "tpcc/kmeans.hpp"
#include "tpcc/spectral.hpp"

namespace tpcc {

void validate(const TpccConfig& config) {
    if (config.epsilon && !(*config.epsilon > 0.0)) {
        throw ConfigError("epsilon must be > 0");
    }
    if (config.max_dim && *config.max_dim < 0) {
        throw ConfigError("max_dim must be >= 0");
    }
    if (config.final_k < 1) {
        throw ConfigError("final_k must be >= 1");
    }
    if (!(config.kernel_tol > 0.0)) {
        throw ConfigError("kernel tolerance must be > 0");
    }
    if (config.knn < 1 || config.restarts < 1 || config.subsample_cap < 1) {
        throw ConfigError("knn, restarts and subsample_cap must be >= 1");
    }
    if (!(config.persistence_fraction > 0.0 && config.persistence_fraction < 1.0)) {
        throw ConfigError("persistence fraction must lie in (0, 1)");
    }
    if (config.max_eps && !(*config.max_eps > 0.0)) {
        throw ConfigError("max_eps must be > 0");
    }
    if (config.landmark_count && *config.landmark_count < 1) {
        throw ConfigError("landmark count must be >= 1");
    }
}

std::vector<int> Diagnostics::betti_numbers() const {
    std::vector<int> out;
    for (const auto& d : dims) {
        out.push_back(d.betti);
    }
    return out;
}

bool Diagnostics::betti_matches_persistence() const {
    return std::all_of(dims.begin(), dims.end(),
                       [](const DimensionDiagnostics& d) { return d.betti == d.persistence_betti; });
}

double enclosing_radius(const PointCloud& cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        const double far = (cloud.coords().rowwise() - cloud.point(i)).rowwise().norm().maxCoeff();
        best = std::min(best, far);
    }
    return best;
}

namespace {

using Clock = std::chrono::steady_clock;

class StageRunner {
public:
    explicit StageRunner(Diagnostics& diag) : diag_(diag) {}

    template <class F>
    auto operator()(const std::string& name, F&& body) {
        const auto start = Clock::now();
        try {
            if constexpr (std::is_void_v<decltype(body())>) {
                body();
                record(name, start);
            } else {
                auto out = body();
                record(name, start);
                return out;
            }
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            throw StageError(name, e.what());
        }
    }

private:
    void record(const std::string& name, Clock::time_point start) {
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        diag_.timings.emplace_back(name, elapsed.count());
    }

    Diagnostics& diag_;
};

struct ScaleChoice {
    double epsilon = 0.0;
    bool fallback = false;
    Eigen::Index sample = 0;
};

/// Persistence-based scale, shrinking to landmarks while the filtration is too large.
ScaleChoice choose_scale(const PointCloud& cloud, const TpccConfig& config, int max_dim) {
    PersistenceOptions options;
    options.simplex_cap = config.simplex_cap;
    Eigen::Index sample = cloud.size();
    for (;;) {
        const PointCloud* used = &cloud;
        PointCloud reduced(Coordinates(1, cloud.dimension()));
        if (sample < cloud.size()) {
            const auto idx = minmax_landmarks(cloud, sample, config.seed);
            reduced = cloud.subset(idx);
            used = &reduced;
        }
        const double max_eps = config.max_eps ? *config.max_eps : enclosing_radius(*used);
        try {
            const PersistenceDiagram pd = vr_persistence(*used, max_eps, max_dim, options);
            const EpsilonChoice choice = select_epsilon(pd, config.persistence_fraction);
            return {choice.epsilon, choice.fallback, sample};
        } catch (const CapacityError&) {
            if (sample <= 8) {
                throw;
            }
            sample /= 2;
        }
    }
}

TpccResult run_on(const PointCloud& cloud, const TpccConfig& config, Diagnostics& diag) {
    StageRunner stage(diag);
    TpccResult result;
    const int max_dim =
        config.max_dim ? *config.max_dim
                       : static_cast<int>(std::clamp<Eigen::Index>(cloud.dimension() - 1, 0, 2));
    diag.max_dim = max_dim;

    if (config.epsilon) {
        diag.epsilon = *config.epsilon;
        diag.epsilon_source = "given";
        diag.epsilon_sample = cloud.size();
    } else {
        const ScaleChoice choice =
            stage("epsilon", [&] { return choose_scale(cloud, config, max_dim); });
        diag.epsilon = choice.epsilon;
        diag.epsilon_source = choice.fallback ? "fallback" : "persistence";
        diag.epsilon_sample = choice.sample;
    }

    result.complex = stage("complex", [&] {
        return build_vr(cloud, diag.epsilon, max_dim + 1, config.simplex_cap);
    });
    const SimplicialComplex& sc = result.complex;

    // bars of the complex's own filtration that survive to epsilon are its homology
    const PersistenceDiagram pd =
        stage("persistence", [&] { return filtration_persistence(sc, max_dim, diag.epsilon); });

    std::vector<int> cluster_count;
    for (int k = 0; k <= max_dim; ++k) {
        const std::string name = "dimension " + std::to_string(k);
        DimensionDiagnostics dd;
        dd.dim = k;
        dd.simplex_count = sc.count(k);
        dd.persistence_betti = static_cast<int>(pd.infinite_count(k));

        const HodgeLaplacian lap = stage(name + " laplacian", [&] { return hodge_laplacian(sc, k); });
        KernelOptions kopt;
        kopt.tol = config.kernel_tol;
        kopt.seed = config.seed + static_cast<std::uint64_t>(k);
        kopt.expected_dim = dd.persistence_betti;
        const KernelBasis kb = stage(name + " kernel", [&] {
            try {
                return kernel_basis(lap, kopt);
            } catch (const AmbiguousKernelError&) {
                dd.gap_check_failed = true;
                kopt.expected_dim.reset();
                return kernel_basis(lap, kopt);
            }
        });
        dd.betti = kb.betti();
        dd.kernel_scale = kb.scale;
        dd.kernel_residual = kb.max_residual;
        dd.next_eigenvalue = kb.next_eigenvalue;

        FeatureSpace fs = embed(kb);
        std::vector<int> labels;
        int clusters = 0;
        if (dd.betti > 0) {
            const auto ku = static_cast<std::size_t>(k);
            clusters = ku < config.clusters_per_dim.size() && config.clusters_per_dim[ku] > 0
                           ? config.clusters_per_dim[ku]
                           : dd.betti;
            labels = stage(name + " clustering", [&] {
                SubspaceOptions sopt;
                sopt.dim_candidates = config.dim_candidates;
                sopt.subsample_cap = std::max<std::size_t>(config.subsample_cap,
                                                           static_cast<std::size_t>(clusters));
                sopt.trivial_threshold = config.trivial_threshold;
                sopt.restarts = config.restarts;
                sopt.seed = config.seed * 1000003ULL + static_cast<std::uint64_t>(k);
                // never ask for more clusters than there are non-trivial rows
                const Eigen::VectorXd norms = fs.rows.rowwise().norm();
                std::vector<double> nonzero;
                for (Eigen::Index i = 0; i < norms.size(); ++i) {
                    if (norms(i) > 1e-8 * norms.maxCoeff()) {
                        nonzero.push_back(norms(i));
                    }
                }
                std::nth_element(nonzero.begin(),
                                 nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2),
                                 nonzero.end());
                const double cut = config.trivial_threshold * nonzero[nonzero.size() / 2];
                const auto available = std::count_if(nonzero.begin(), nonzero.end(),
                                                     [cut](double v) { return v >= cut; });
                clusters = static_cast<int>(std::min<std::ptrdiff_t>(clusters, available));
                sopt.n_clusters = clusters;
                return label_simplices(fs, sopt, config.knn);
            });
        } else {
            labels.assign(sc.count(k), kTrivialCluster);
        }
        dd.clusters = clusters;
        cluster_count.push_back(clusters);
        result.simplex_labels.push_back(std::move(labels));
        result.features.push_back(std::move(fs));
        diag.dims.push_back(dd);
    }

    result.signatures = stage("signatures", [&] {
        return signatures(sc, result.simplex_labels, cluster_count);
    });
    result.labels = stage("final clustering", [&] {
        const int k = static_cast<int>(std::min<Eigen::Index>(config.final_k, cloud.size()));
        return final_cluster(result.signatures, k, config.seed, config.final_method);
    });
    return result;
}

}  // namespace

TpccResult run_tpcc(const PointCloud& cloud, const TpccConfig& config) {
    Diagnostics diag;
    StageRunner stage(diag);
    stage("config", [&] { validate(config); });
    diag.point_count = cloud.size();

    if (!config.landmark_count || *config.landmark_count >= cloud.size()) {
        TpccResult result = run_on(cloud, config, diag);
        diag.landmark_count = cloud.size();
        result.diagnostics = std::move(diag);
        return result;
    }

    const auto landmarks = stage("landmarks", [&] {
        return minmax_landmarks(cloud, *config.landmark_count, config.seed);
    });
    const PointCloud reduced = cloud.subset(landmarks);
    TpccResult result = run_on(reduced, config, diag);
    std::vector<int> labels(static_cast<std::size_t>(cloud.size()));
    stage("label transfer", [&] {
        for (Eigen::Index i = 0; i < cloud.size(); ++i) {
            Eigen::Index nearest = 0;
            (reduced.coords().rowwise() - cloud.point(i)).rowwise().squaredNorm().minCoeff(&nearest);
            labels[static_cast<std::size_t>(i)] = result.labels[static_cast<std::size_t>(nearest)];
        }
    });
    result.labels = std::move(labels);
    result.landmarks = landmarks;
    diag.landmark_count = static_cast<Eigen::Index>(landmarks.size());
    result.diagnostics = std::move(diag);
    return result;
}

std::vector<int> baseline_spectral_vr(const PointCloud& cloud, double epsilon, int k,
                                      std::uint64_t seed) {
    if (k < 1 || k > cloud.size()) {
        throw ArgumentError("spectral baseline needs 1 <= k <= point count");
    }
    const SimplicialComplex sc = build_vr(cloud, epsilon, 1);
    const HodgeLaplacian lap = hodge_laplacian(sc, 0);
    const Eigenpairs pairs = smallest_eigenpairs(lap.matrix, k, seed);
    return kmeans(pairs.vectors, k, 20, seed).labels;
}

}  // namespace tpcc
