#include "tpcc/complex.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "tpcc/errors.hpp"

namespace tpcc {

SimplicialComplex::SimplicialComplex(Eigen::Index vertex_count, int max_dim)
    : vertex_count_(vertex_count) {
    if (max_dim < 0) {
        throw ArgumentError("complex dimension must be >= 0");
    }
    if (vertex_count < 0) {
        throw ArgumentError("vertex count must be >= 0");
    }
    flat_.resize(static_cast<std::size_t>(max_dim) + 1);
    diameters_.resize(static_cast<std::size_t>(max_dim) + 1);
}

SimplicialComplex SimplicialComplex::from_simplices(
    Eigen::Index vertex_count, const std::vector<std::vector<VertexId>>& simplices, int max_dim) {
    std::vector<std::set<std::vector<VertexId>>> faces(static_cast<std::size_t>(max_dim) + 1);
    for (VertexId v = 0; v < static_cast<VertexId>(vertex_count); ++v) {
        faces[0].insert({v});
    }
    for (std::vector<VertexId> s : simplices) {
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end() || s.empty()) {
            throw ArgumentError("simplex vertices must be distinct and non-empty");
        }
        if (s.back() >= static_cast<VertexId>(vertex_count)) {
            throw ArgumentError("simplex vertex id out of range");
        }
        // enumerate all non-empty subsets up to max_dim + 1 vertices
        const std::size_t m = s.size();
        if (m > 30) {
            throw ArgumentError("simplex too large");
        }
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            const int size = std::popcount(mask);
            if (size > max_dim + 1) {
                continue;
            }
            std::vector<VertexId> face;
            for (std::size_t b = 0; b < m; ++b) {
                if (mask & (1u << b)) {
                    face.push_back(s[b]);
                }
            }
            faces[static_cast<std::size_t>(size - 1)].insert(std::move(face));
        }
    }
    SimplicialComplex sc(vertex_count, max_dim);
    for (const auto& level : faces) {
        for (const auto& f : level) {
            sc.push_back(f);
        }
    }
    return sc;
}

std::size_t SimplicialComplex::count(int dim) const {
    if (dim < 0 || dim > max_dim()) {
        return 0;
    }
    return flat_[static_cast<std::size_t>(dim)].size() / static_cast<std::size_t>(dim + 1);
}

std::span<const VertexId> SimplicialComplex::simplex(int dim, std::size_t i) const {
    const auto width = static_cast<std::size_t>(dim + 1);
    return {flat_[static_cast<std::size_t>(dim)].data() + i * width, width};
}

std::optional<std::size_t> SimplicialComplex::index_of(std::span<const VertexId> vertices) const {
    const int dim = static_cast<int>(vertices.size()) - 1;
    if (dim < 0 || dim > max_dim()) {
        return std::nullopt;
    }
    std::size_t lo = 0;
    std::size_t hi = count(dim);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto s = simplex(dim, mid);
        if (std::lexicographical_compare(s.begin(), s.end(), vertices.begin(), vertices.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < count(dim)) {
        const auto s = simplex(dim, lo);
        if (std::equal(s.begin(), s.end(), vertices.begin(), vertices.end())) {
            return lo;
        }
    }
    return std::nullopt;
}

const std::vector<double>& SimplicialComplex::diameters(int dim) const {
    if (dim < 0 || dim > max_dim()) {
        throw ArgumentError("dimension " + std::to_string(dim) + " not materialized");
    }
    return diameters_[static_cast<std::size_t>(dim)];
}

std::size_t SimplicialComplex::total_count() const {
    std::size_t total = 0;
    for (int d = 0; d <= max_dim(); ++d) {
        total += count(d);
    }
    return total;
}

void SimplicialComplex::push_back(std::span<const VertexId> vertices, double diameter) {
    const int dim = static_cast<int>(vertices.size()) - 1;
    if (dim < 0 || dim > max_dim()) {
        throw ArgumentError("simplex dimension outside materialized range");
    }
    auto& flat = flat_[static_cast<std::size_t>(dim)];
    flat.insert(flat.end(), vertices.begin(), vertices.end());
    diameters_[static_cast<std::size_t>(dim)].push_back(diameter);
}

bool SimplicialComplex::is_closed() const {
    std::vector<VertexId> face;
    for (int d = 1; d <= max_dim(); ++d) {
        for (std::size_t i = 0; i < count(d); ++i) {
            const auto s = simplex(d, i);
            for (int omit = 0; omit <= d; ++omit) {
                face.clear();
                for (int j = 0; j <= d; ++j) {
                    if (j != omit) {
                        face.push_back(s[static_cast<std::size_t>(j)]);
                    }
                }
                if (!index_of(face)) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace {

struct Neighbor {
    VertexId id;
    double dist;
};

class RipsExpander {
public:
    RipsExpander(const PointCloud& cloud, double epsilon, int max_dim, std::size_t cap)
        : cloud_(cloud), max_dim_(max_dim), cap_(cap), sc_(cloud.size(), max_dim) {
        const Eigen::Index n = cloud.size();
        upper_.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto dists = (cloud.coords().bottomRows(n - i - 1).rowwise() - cloud.point(i))
                                   .rowwise()
                                   .norm();
            for (Eigen::Index j = 0; j < dists.size(); ++j) {
                if (dists(j) < epsilon) {
                    upper_[static_cast<std::size_t>(i)].push_back(
                        {static_cast<VertexId>(i + 1 + j), dists(j)});
                }
            }
        }
    }

    SimplicialComplex run() {
        // DFS over the lexicographic tree emits each dimension in lexicographic order,
        // but interleaves dimensions; collect per dimension and append afterwards.
        levels_.resize(static_cast<std::size_t>(max_dim_) + 1);
        level_diams_.resize(static_cast<std::size_t>(max_dim_) + 1);
        std::vector<VertexId> tau;
        for (VertexId v = 0; v < static_cast<VertexId>(cloud_.size()); ++v) {
            tau.assign(1, v);
            emit(tau, 0.0);
            if (max_dim_ >= 1) {
                std::vector<VertexId> candidates;
                for (const Neighbor& nb : upper_[v]) {
                    candidates.push_back(nb.id);
                }
                expand(tau, 0.0, candidates);
            }
        }
        for (int d = 0; d <= max_dim_; ++d) {
            const auto& flat = levels_[static_cast<std::size_t>(d)];
            const auto width = static_cast<std::size_t>(d + 1);
            for (std::size_t i = 0; i * width < flat.size(); ++i) {
                sc_.push_back(std::span<const VertexId>(flat.data() + i * width, width),
                              level_diams_[static_cast<std::size_t>(d)][i]);
            }
            levels_[static_cast<std::size_t>(d)].clear();
            levels_[static_cast<std::size_t>(d)].shrink_to_fit();
        }
        return std::move(sc_);
    }

private:
    void emit(const std::vector<VertexId>& s, double diam) {
        if (++emitted_ > cap_) {
            throw CapacityError("Rips complex exceeds the simplex cap of " + std::to_string(cap_),
                                cap_);
        }
        const auto d = s.size() - 1;
        levels_[d].insert(levels_[d].end(), s.begin(), s.end());
        level_diams_[d].push_back(diam);
    }

    double distance_to(VertexId u, VertexId x) const {
        // u < x; look x up in u's upper list
        const auto& list = upper_[u];
        const auto it = std::lower_bound(list.begin(), list.end(), x,
                                         [](const Neighbor& a, VertexId b) { return a.id < b; });
        return it->dist;
    }

    void expand(std::vector<VertexId>& tau, double diam, const std::vector<VertexId>& candidates) {
        for (VertexId x : candidates) {
            double new_diam = diam;
            for (VertexId u : tau) {
                new_diam = std::max(new_diam, distance_to(u, x));
            }
            tau.push_back(x);
            emit(tau, new_diam);
            if (static_cast<int>(tau.size()) - 1 < max_dim_) {
                std::vector<VertexId> next;
                const auto& nx = upper_[x];
                auto a = candidates.begin();
                auto b = nx.begin();
                while (a != candidates.end() && b != nx.end()) {
                    if (*a < b->id) {
                        ++a;
                    } else if (b->id < *a) {
                        ++b;
                    } else {
                        next.push_back(*a);
                        ++a;
                        ++b;
                    }
                }
                if (!next.empty()) {
                    expand(tau, new_diam, next);
                }
            }
            tau.pop_back();
        }
    }

    const PointCloud& cloud_;
    int max_dim_;
    std::size_t cap_;
    std::size_t emitted_ = 0;
    SimplicialComplex sc_;
    std::vector<std::vector<Neighbor>> upper_;
    std::vector<std::vector<VertexId>> levels_;
    std::vector<std::vector<double>> level_diams_;
};

}  // namespace

SimplicialComplex build_vr(const PointCloud& cloud, double epsilon, int max_dim,
                           std::size_t simplex_cap) {
    if (!(epsilon > 0.0)) {
        throw ArgumentError("epsilon must be > 0");
    }
    if (max_dim < 0) {
        throw ArgumentError("max_dim must be >= 0");
    }
    return RipsExpander(cloud, epsilon, max_dim, simplex_cap).run();
}

BoundaryMatrix boundary_matrix(const SimplicialComplex& sc, int n) {
    if (n < 0) {
        throw ArgumentError("boundary matrix index must be >= 0, got " + std::to_string(n));
    }
    if (n + 1 > sc.max_dim()) {
        throw ArgumentError("boundary matrix " + std::to_string(n) + " needs dimension " +
                            std::to_string(n + 1) + " materialized");
    }
    const auto rows = static_cast<Eigen::Index>(sc.count(n));
    const auto cols = static_cast<Eigen::Index>(sc.count(n + 1));
    BoundaryMatrix b{n, Eigen::SparseMatrix<int>(rows, cols)};
    if (rows == 0 || cols == 0) {
        return b;
    }
    std::vector<Eigen::Triplet<int>> triplets;
    triplets.reserve(static_cast<std::size_t>(cols) * static_cast<std::size_t>(n + 2));
    std::vector<VertexId> face(static_cast<std::size_t>(n + 1));
    for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j) {
        const auto s = sc.simplex(n + 1, j);
        for (int omit = 0; omit <= n + 1; ++omit) {
            std::size_t w = 0;
            for (int k = 0; k <= n + 1; ++k) {
                if (k != omit) {
                    face[w++] = s[static_cast<std::size_t>(k)];
                }
            }
            const auto row = sc.index_of(face);
            if (!row) {
                throw ArgumentError("complex is not closed under faces");
            }
            triplets.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(j),
                                  omit % 2 == 0 ? 1 : -1);
        }
    }
    b.matrix.setFromTriplets(triplets.begin(), triplets.end());
    b.matrix.makeCompressed();
    return b;
}

}  // namespace tpcc
