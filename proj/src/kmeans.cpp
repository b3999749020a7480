#include "tpcc/kmeans.hpp"

#include <limits>
#include <map>
#include <random>

#include "tpcc/errors.hpp"

namespace tpcc {

std::vector<int> canonical_labels(const std::vector<int>& labels) {
    std::map<int, int> renumber;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        const auto it = renumber.try_emplace(l, static_cast<int>(renumber.size())).first;
        out.push_back(it->second);
    }
    return out;
}

namespace {

Eigen::MatrixXd plus_plus_seed(const Eigen::MatrixXd& data, int k, std::mt19937_64& rng) {
    const Eigen::Index n = data.rows();
    Eigen::MatrixXd centers(k, data.cols());
    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    centers.row(0) = data.row(first(rng));
    Eigen::VectorXd d2 = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = unit(rng) * total;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                target -= d2(i);
                if (target < 0.0 && d2(i) > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            // all samples coincide with a center already
            pick = first(rng);
        }
        centers.row(c) = data.row(pick);
        d2 = d2.cwiseMin((data.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }
    return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& data, Eigen::MatrixXd centers, int max_iterations) {
    const Eigen::Index n = data.rows();
    const int k = static_cast<int>(centers.rows());
    KMeansResult r;
    r.labels.assign(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < max_iterations; ++it) {
        bool changed = false;
        r.inertia = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (data.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            r.inertia += best_d;
            if (r.labels[static_cast<std::size_t>(i)] != best) {
                r.labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = r.labels[static_cast<std::size_t>(i)];
            sums.row(c) += data.row(i);
            ++sizes[static_cast<std::size_t>(c)];
        }
        for (int c = 0; c < k; ++c) {
            // an emptied center keeps its position
            if (sizes[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / sizes[static_cast<std::size_t>(c)];
            }
        }
    }
    r.centers = std::move(centers);
    return r;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& data, int k, int restarts, std::uint64_t seed,
                    int max_iterations) {
    if (k < 1) {
        throw ArgumentError("k-means needs k >= 1");
    }
    if (data.rows() < k) {
        throw ArgumentError("k-means with k = " + std::to_string(k) + " on " +
                            std::to_string(data.rows()) + " samples");
    }
    if (restarts < 1) {
        throw ArgumentError("k-means needs at least one restart");
    }
    std::mt19937_64 rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        KMeansResult run = lloyd(data, plus_plus_seed(data, k, rng), max_iterations);
        // strict improvement beyond rounding keeps the earliest restart on ties
        if (run.inertia < best.inertia * (1.0 - 1e-12)) {
            best = std::move(run);
        }
    }
    best.labels = canonical_labels(best.labels);
    return best;
}

}  // namespace tpcc
