#include "tpcc/simplex_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "tpcc/errors.hpp"

namespace tpcc {

FeatureSpace embed(const KernelBasis& basis) {
    return FeatureSpace{basis.dim, basis.vectors};
}

double sign_invariant_distance(const Eigen::Ref<const Eigen::RowVectorXd>& u,
                               const Eigen::Ref<const Eigen::RowVectorXd>& v) {
    return std::sqrt(std::min((u - v).squaredNorm(), (u + v).squaredNorm()));
}

namespace {

struct Fit {
    std::vector<int> labels;  // 0-based cluster per sample row
    std::vector<Eigen::MatrixXd> bases;
    double objective = 0.0;
    int empty = 0;
    int total_dim = 0;
};

double residual2(const Eigen::RowVectorXd& row, const Eigen::MatrixXd& basis) {
    if (basis.cols() == 0) {
        return row.squaredNorm();
    }
    return std::max(0.0, row.squaredNorm() - (row * basis).squaredNorm());
}

Eigen::MatrixXd line_through(const Eigen::RowVectorXd& row) {
    return (row.transpose() / row.norm()).eval();
}

class KSubspaces {
public:
    KSubspaces(const Eigen::MatrixXd& data, const SubspaceOptions& options)
        : data_(data), options_(options), dims_(options.dim_candidates) {
        std::sort(dims_.begin(), dims_.end());
        dims_.erase(std::unique(dims_.begin(), dims_.end()), dims_.end());
        energy_ = data.squaredNorm();
    }

    Fit run(int k, std::mt19937_64& rng) const {
        Fit fit;
        fit.bases = seed_lines(k, rng);
        iterate(fit);
        repair_empty(fit, rng);
        summarize(fit);
        return fit;
    }

    double energy() const noexcept { return energy_; }

private:
    std::vector<Eigen::MatrixXd> seed_lines(int k, std::mt19937_64& rng) const {
        const Eigen::Index m = data_.rows();
        std::vector<Eigen::MatrixXd> bases;
        std::uniform_int_distribution<Eigen::Index> pick(0, m - 1);
        bases.push_back(line_through(data_.row(pick(rng))));
        Eigen::VectorXd weight(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            weight(i) = residual2(data_.row(i), bases[0]);
        }
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int c = 1; c < k; ++c) {
            const double total = weight.sum();
            Eigen::Index chosen = pick(rng);
            if (total > 0.0) {
                double target = unit(rng) * total;
                chosen = m - 1;
                for (Eigen::Index i = 0; i < m; ++i) {
                    target -= weight(i);
                    if (target < 0.0 && weight(i) > 0.0) {
                        chosen = i;
                        break;
                    }
                }
            }
            bases.push_back(line_through(data_.row(chosen)));
            for (Eigen::Index i = 0; i < m; ++i) {
                weight(i) = std::min(weight(i), residual2(data_.row(i), bases.back()));
            }
        }
        return bases;
    }

    /// Nearest subspace; ties go to the lower dimension, then the lower id.
    std::pair<int, double> nearest(const Eigen::RowVectorXd& row,
                                   const std::vector<Eigen::MatrixXd>& bases) const {
        int best = 0;
        double best_r = std::numeric_limits<double>::infinity();
        const double tie = 1e-12 * std::max(row.squaredNorm(), 1e-300);
        for (int c = 0; c < static_cast<int>(bases.size()); ++c) {
            const double r = residual2(row, bases[static_cast<std::size_t>(c)]);
            if (r < best_r - tie ||
                (std::abs(r - best_r) <= tie &&
                 bases[static_cast<std::size_t>(c)].cols() <
                     bases[static_cast<std::size_t>(best)].cols())) {
                best = c;
                best_r = r;
            }
        }
        return {best, best_r};
    }

    Eigen::MatrixXd refit(const std::vector<Eigen::Index>& members) const {
        const Eigen::Index width = data_.cols();
        Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(width, width);
        for (Eigen::Index i : members) {
            scatter.noalias() += data_.row(i).transpose() * data_.row(i);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scatter);
        const Eigen::VectorXd values = eig.eigenvalues().reverse();
        const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
        const double trace = std::max(values.sum(), 0.0);
        // a subspace as wide as the feature space would absorb every row
        const auto limit = std::min<Eigen::Index>(std::max<Eigen::Index>(width - 1, 1),
                                                  static_cast<Eigen::Index>(members.size()));
        int chosen = 0;
        for (int d : dims_) {
            if (d > limit) {
                break;
            }
            chosen = d;
            if (trace <= 0.0 || values.head(d).sum() >= options_.variance_captured * trace) {
                break;
            }
        }
        chosen = std::max(chosen, 1);
        return vectors.leftCols(chosen);
    }

    void iterate(Fit& fit) const {
        const Eigen::Index m = data_.rows();
        const int k = static_cast<int>(fit.bases.size());
        fit.labels.assign(static_cast<std::size_t>(m), -1);
        std::vector<double> res(static_cast<std::size_t>(m), 0.0);
        for (int it = 0; it < options_.max_iterations; ++it) {
            bool changed = false;
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto [c, r] = nearest(data_.row(i), fit.bases);
                res[static_cast<std::size_t>(i)] = r;
                if (fit.labels[static_cast<std::size_t>(i)] != c) {
                    fit.labels[static_cast<std::size_t>(i)] = c;
                    changed = true;
                }
            }
            if (!changed && it > 0) {
                break;
            }
            std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(k));
            for (Eigen::Index i = 0; i < m; ++i) {
                members[static_cast<std::size_t>(fit.labels[static_cast<std::size_t>(i)])]
                    .push_back(i);
            }
            std::vector<char> taken(static_cast<std::size_t>(m), 0);
            for (int c = 0; c < k; ++c) {
                auto& mem = members[static_cast<std::size_t>(c)];
                if (!mem.empty()) {
                    fit.bases[static_cast<std::size_t>(c)] = refit(mem);
                    continue;
                }
                // reseed an empty cluster at the worst-fitted row
                Eigen::Index worst = -1;
                for (Eigen::Index i = 0; i < m; ++i) {
                    if (!taken[static_cast<std::size_t>(i)] &&
                        (worst < 0 || res[static_cast<std::size_t>(i)] >
                                          res[static_cast<std::size_t>(worst)])) {
                        worst = i;
                    }
                }
                if (worst >= 0 && res[static_cast<std::size_t>(worst)] > 0.0) {
                    taken[static_cast<std::size_t>(worst)] = 1;
                    fit.bases[static_cast<std::size_t>(c)] = line_through(data_.row(worst));
                }
            }
        }
    }

    /// A 2-dimensional cluster that holds two line-like groups is split into
    /// two lines when an empty cluster is available and the split costs little.
    void repair_empty(Fit& fit, std::mt19937_64& rng) const {
        if (std::find(dims_.begin(), dims_.end(), 1) == dims_.end()) {
            return;
        }
        for (int guard = 0; guard < static_cast<int>(fit.bases.size()); ++guard) {
            std::vector<std::vector<Eigen::Index>> members(fit.bases.size());
            for (std::size_t i = 0; i < fit.labels.size(); ++i) {
                members[static_cast<std::size_t>(fit.labels[i])].push_back(
                    static_cast<Eigen::Index>(i));
            }
            const auto empty_it = std::find_if(members.begin(), members.end(),
                                               [](const auto& v) { return v.empty(); });
            if (empty_it == members.end()) {
                return;
            }
            const auto empty_id = static_cast<std::size_t>(empty_it - members.begin());
            double best_cost = std::numeric_limits<double>::infinity();
            std::size_t best_cluster = 0;
            std::vector<int> best_split;
            std::vector<Eigen::MatrixXd> best_lines;
            for (std::size_t c = 0; c < fit.bases.size(); ++c) {
                if (fit.bases[c].cols() != 2 || members[c].size() < 2) {
                    continue;
                }
                const auto& mem = members[c];
                Eigen::MatrixXd sub(static_cast<Eigen::Index>(mem.size()), data_.cols());
                for (std::size_t j = 0; j < mem.size(); ++j) {
                    sub.row(static_cast<Eigen::Index>(j)) = data_.row(mem[j]);
                }
                SubspaceOptions lines = options_;
                lines.dim_candidates = {1};
                KSubspaces inner(sub, lines);
                Fit split;
                for (int r = 0; r < 3; ++r) {
                    Fit attempt;
                    attempt.bases = inner.seed_lines(2, rng);
                    inner.iterate(attempt);
                    inner.summarize(attempt);
                    if (r == 0 || attempt.objective < split.objective) {
                        split = std::move(attempt);
                    }
                }
                double before = 0.0;
                for (Eigen::Index i : mem) {
                    before += residual2(data_.row(i), fit.bases[c]);
                }
                const double cost = split.objective - before;
                if (split.empty == 0 && cost <= 0.05 * sub.squaredNorm() && cost < best_cost) {
                    best_cost = cost;
                    best_cluster = c;
                    best_split = split.labels;
                    best_lines = split.bases;
                }
            }
            if (best_split.empty()) {
                return;
            }
            const auto& mem = members[best_cluster];
            for (std::size_t j = 0; j < mem.size(); ++j) {
                fit.labels[static_cast<std::size_t>(mem[j])] =
                    best_split[j] == 0 ? static_cast<int>(best_cluster) : static_cast<int>(empty_id);
            }
            fit.bases[best_cluster] = best_lines[0];
            fit.bases[empty_id] = best_lines[1];
        }
    }

    void summarize(Fit& fit) const {
        std::vector<int> sizes(fit.bases.size(), 0);
        fit.objective = 0.0;
        for (std::size_t i = 0; i < fit.labels.size(); ++i) {
            const auto c = static_cast<std::size_t>(fit.labels[i]);
            ++sizes[c];
            fit.objective += residual2(data_.row(static_cast<Eigen::Index>(i)), fit.bases[c]);
        }
        fit.empty = static_cast<int>(std::count(sizes.begin(), sizes.end(), 0));
        fit.total_dim = 0;
        for (const auto& b : fit.bases) {
            fit.total_dim += static_cast<int>(b.cols());
        }
    }

    const Eigen::MatrixXd& data_;
    const SubspaceOptions& options_;
    std::vector<int> dims_;
    double energy_ = 0.0;
};

bool better(const Fit& a, const Fit& b, double tolerance) {
    if (a.objective < b.objective - tolerance) {
        return true;
    }
    if (a.objective > b.objective + tolerance) {
        return false;
    }
    if (a.empty != b.empty) {
        return a.empty < b.empty;
    }
    return a.total_dim < b.total_dim;
}

}  // namespace

SubspaceClustering cluster_subspaces(const FeatureSpace& fs, const SubspaceOptions& options) {
    if (options.n_clusters < 1) {
        throw ArgumentError("subspace clustering needs at least one cluster");
    }
    if (options.subsample_cap < static_cast<std::size_t>(options.n_clusters)) {
        throw ArgumentError("subsample cap must be at least the cluster count");
    }
    if (options.dim_candidates.empty() ||
        std::any_of(options.dim_candidates.begin(), options.dim_candidates.end(),
                    [](int d) { return d < 1 || d > 2; })) {
        throw ArgumentError("subspace dimension candidates must be 1 or 2");
    }
    if (options.restarts < 1) {
        throw ArgumentError("subspace clustering needs at least one restart");
    }
    const Eigen::Index rows = fs.rows.rows();
    SubspaceClustering out;
    out.labels.assign(static_cast<std::size_t>(rows), kUnlabeled);
    out.trivial.assign(static_cast<std::size_t>(rows), 1);

    std::vector<Eigen::Index> candidates;
    if (fs.rows.cols() > 0 && rows > 0) {
        const Eigen::VectorXd norms = fs.rows.rowwise().norm();
        const double largest = norms.maxCoeff();
        std::vector<double> nonzero;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (norms(i) > 1e-8 * largest) {
                nonzero.push_back(norms(i));
            }
        }
        if (!nonzero.empty()) {
            const auto mid = nonzero.begin() + static_cast<std::ptrdiff_t>(nonzero.size() / 2);
            std::nth_element(nonzero.begin(), mid, nonzero.end());
            const double cut = options.trivial_threshold * *mid;
            for (Eigen::Index i = 0; i < rows; ++i) {
                if (norms(i) >= cut && norms(i) > 1e-8 * largest) {
                    out.trivial[static_cast<std::size_t>(i)] = 0;
                    candidates.push_back(i);
                }
            }
        }
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (out.trivial[static_cast<std::size_t>(i)]) {
            out.labels[static_cast<std::size_t>(i)] = kTrivialCluster;
        }
    }
    if (candidates.size() < static_cast<std::size_t>(options.n_clusters)) {
        throw ArgumentError(std::to_string(options.n_clusters) + " clusters requested but only " +
                            std::to_string(candidates.size()) + " non-trivial rows in dimension " +
                            std::to_string(fs.dim));
    }

    std::mt19937_64 rng(options.seed);
    std::vector<Eigen::Index> sample = candidates;
    if (sample.size() > options.subsample_cap) {
        std::shuffle(sample.begin(), sample.end(), rng);
        sample.resize(options.subsample_cap);
        std::sort(sample.begin(), sample.end());
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(sample.size()), fs.rows.cols());
    for (std::size_t j = 0; j < sample.size(); ++j) {
        data.row(static_cast<Eigen::Index>(j)) = fs.rows.row(sample[j]);
    }

    KSubspaces solver(data, options);
    const double tolerance = 1e-6 * solver.energy();
    Fit best;
    for (int r = 0; r < options.restarts; ++r) {
        Fit fit = solver.run(options.n_clusters, rng);
        if (r == 0 || better(fit, best, tolerance)) {
            best = std::move(fit);
        }
    }
    for (std::size_t j = 0; j < sample.size(); ++j) {
        out.labels[static_cast<std::size_t>(sample[j])] = best.labels[j] + 1;
    }
    out.model.bases = std::move(best.bases);
    out.model.objective = best.objective;
    return out;
}

std::vector<int> extend_knn(const std::vector<int>& labels, const FeatureSpace& fs,
                            int k_neighbors) {
    if (k_neighbors < 1) {
        throw ArgumentError("kNN needs k >= 1");
    }
    if (labels.size() != static_cast<std::size_t>(fs.rows.rows())) {
        throw ArgumentError("label count does not match the feature rows");
    }
    std::vector<Eigen::Index> reference;
    int max_label = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != kUnlabeled) {
            reference.push_back(static_cast<Eigen::Index>(i));
            max_label = std::max(max_label, labels[i]);
        }
    }
    std::vector<int> out = labels;
    if (reference.size() == labels.size()) {
        return out;
    }
    if (reference.empty()) {
        throw ArgumentError("kNN extension needs at least one labelled row");
    }
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(k_neighbors), reference.size());
    std::vector<std::pair<double, Eigen::Index>> dist(reference.size());
    std::vector<int> votes(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != kUnlabeled) {
            continue;
        }
        const auto row = fs.rows.row(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j < reference.size(); ++j) {
            dist[j] = {sign_invariant_distance(row, fs.rows.row(reference[j])), reference[j]};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::fill(votes.begin(), votes.end(), 0);
        for (std::size_t j = 0; j < k; ++j) {
            ++votes[static_cast<std::size_t>(labels[static_cast<std::size_t>(dist[j].second)])];
        }
        out[i] = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    }
    return out;
}

std::vector<int> label_simplices(const FeatureSpace& fs, const SubspaceOptions& options,
                                 int k_neighbors, SubspaceModel* model) {
    SubspaceClustering clustering = cluster_subspaces(fs, options);
    if (model) {
        *model = clustering.model;
    }
    // vote only among clustered non-trivial rows; trivial rows are already final
    std::vector<int> masked = clustering.labels;
    bool any_unlabeled = false;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (clustering.trivial[i]) {
            masked[i] = kUnlabeled;
        } else if (masked[i] == kUnlabeled) {
            any_unlabeled = true;
        }
    }
    if (!any_unlabeled) {
        return clustering.labels;
    }
    // only non-trivial unlabelled rows should be classified
    FeatureSpace reduced{fs.dim, Eigen::MatrixXd()};
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < masked.size(); ++i) {
        if (!clustering.trivial[i]) {
            keep.push_back(static_cast<Eigen::Index>(i));
        }
    }
    reduced.rows.resize(static_cast<Eigen::Index>(keep.size()), fs.rows.cols());
    std::vector<int> reduced_labels(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
        reduced.rows.row(static_cast<Eigen::Index>(j)) = fs.rows.row(keep[j]);
        reduced_labels[j] = masked[static_cast<std::size_t>(keep[j])];
    }
    const std::vector<int> extended = extend_knn(reduced_labels, reduced, k_neighbors);
    std::vector<int> out = clustering.labels;
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out[static_cast<std::size_t>(keep[j])] = extended[j];
    }
    return out;
}

}  // namespace tpcc
