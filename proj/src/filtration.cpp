#include "tpcc/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>

#include "tpcc/errors.hpp"

namespace tpcc {

std::size_t PersistenceDiagram::alive_count(int dim, double eps) const {
    if (dim < 0 || dim > max_dim()) {
        return 0;
    }
    return static_cast<std::size_t>(
        std::count_if(bars[static_cast<std::size_t>(dim)].begin(),
                      bars[static_cast<std::size_t>(dim)].end(),
                      [eps](const PersistencePair& p) { return p.alive_at(eps); }));
}

std::size_t PersistenceDiagram::infinite_count(int dim) const {
    if (dim < 0 || dim > max_dim()) {
        return 0;
    }
    return static_cast<std::size_t>(
        std::count_if(bars[static_cast<std::size_t>(dim)].begin(),
                      bars[static_cast<std::size_t>(dim)].end(),
                      [](const PersistencePair& p) { return p.is_infinite(); }));
}

bool PersistenceDiagram::empty() const {
    return std::all_of(bars.begin(), bars.end(), [](const auto& b) { return b.empty(); });
}

namespace {

using Column = std::vector<std::uint32_t>;

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// Symmetric difference of two sorted index lists (GF(2) column addition).
void add_column(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

/// Position of every simplex of `dim` in the filtration restricted to that dimension.
struct DimensionOrder {
    std::vector<std::uint32_t> order;  // rank -> simplex id
    std::vector<std::uint32_t> rank;   // simplex id -> rank
};

DimensionOrder order_dimension(const SimplicialComplex& sc, int dim) {
    const auto& diam = sc.diameters(dim);
    DimensionOrder o;
    o.order.resize(sc.count(dim));
    std::iota(o.order.begin(), o.order.end(), 0u);
    std::stable_sort(o.order.begin(), o.order.end(),
                     [&diam](std::uint32_t a, std::uint32_t b) { return diam[a] < diam[b]; });
    o.rank.resize(o.order.size());
    for (std::uint32_t r = 0; r < o.order.size(); ++r) {
        o.rank[o.order[r]] = r;
    }
    return o;
}

/// Faces of every simplex of `dim` (dim >= 1), as ids in dimension dim - 1.
std::vector<std::uint32_t> face_table(const SimplicialComplex& sc, int dim) {
    const std::size_t m = sc.count(dim);
    const auto width = static_cast<std::size_t>(dim + 1);
    std::vector<std::uint32_t> faces(m * width);
    std::vector<VertexId> face(width - 1);
    for (std::size_t j = 0; j < m; ++j) {
        const auto s = sc.simplex(dim, j);
        for (std::size_t omit = 0; omit < width; ++omit) {
            std::size_t w = 0;
            for (std::size_t k = 0; k < width; ++k) {
                if (k != omit) {
                    face[w++] = s[k];
                }
            }
            const auto idx = sc.index_of(face);
            if (!idx) {
                throw ArgumentError("filtration complex is not closed under faces");
            }
            faces[j * width + omit] = static_cast<std::uint32_t>(*idx);
        }
    }
    return faces;
}

void push_bar(PersistenceDiagram& pd, int dim, double birth, double death) {
    if (death > birth) {
        pd.bars[static_cast<std::size_t>(dim)].push_back({birth, death});
    }
}

void sort_bars(PersistenceDiagram& pd) {
    for (auto& b : pd.bars) {
        std::sort(b.begin(), b.end(), [](const PersistencePair& x, const PersistencePair& y) {
            return x.birth != y.birth ? x.birth < y.birth : x.death < y.death;
        });
    }
}

PersistenceDiagram reduce_cohomology(const SimplicialComplex& sc, int max_dim) {
    PersistenceDiagram pd;
    pd.bars.resize(static_cast<std::size_t>(max_dim) + 1);

    std::vector<DimensionOrder> orders;
    for (int d = 0; d <= max_dim + 1; ++d) {
        orders.push_back(order_dimension(sc, d));
    }

    // k-simplices that already die in dimension k - 1 (cleared columns)
    std::vector<char> killed(sc.count(0), 0);
    Column scratch;
    for (int k = 0; k <= max_dim; ++k) {
        const std::size_t nk = sc.count(k);
        const std::size_t nk1 = sc.count(k + 1);
        const auto& diam_k = sc.diameters(k);
        const auto& diam_k1 = sc.diameters(k + 1);
        const auto& rank_k1 = orders[static_cast<std::size_t>(k + 1)].rank;

        // coboundary lists in CSR form, entries are filtration ranks of cofacets
        std::vector<std::size_t> start(nk + 1, 0);
        std::vector<std::uint32_t> entries;
        {
            const std::vector<std::uint32_t> faces = face_table(sc, k + 1);
            const auto width = static_cast<std::size_t>(k + 2);
            for (std::uint32_t f : faces) {
                ++start[f + 1];
            }
            std::partial_sum(start.begin(), start.end(), start.begin());
            entries.resize(faces.size());
            std::vector<std::size_t> fill(start.begin(), start.end() - 1);
            for (std::size_t j = 0; j < nk1; ++j) {
                for (std::size_t i = 0; i < width; ++i) {
                    entries[fill[faces[j * width + i]]++] = rank_k1[j];
                }
            }
            for (std::size_t s = 0; s < nk; ++s) {
                std::sort(entries.begin() + static_cast<std::ptrdiff_t>(start[s]),
                          entries.begin() + static_cast<std::ptrdiff_t>(start[s + 1]));
            }
        }

        std::vector<char> next_killed(nk1, 0);
        std::vector<std::uint32_t> pivot_owner(nk1, kNone);
        std::vector<Column> reduced;
        reduced.reserve(nk);
        const auto& order_k = orders[static_cast<std::size_t>(k)].order;
        for (std::size_t r = nk; r-- > 0;) {
            const std::uint32_t sigma = order_k[r];
            if (killed[sigma]) {
                continue;
            }
            Column col(entries.begin() + static_cast<std::ptrdiff_t>(start[sigma]),
                       entries.begin() + static_cast<std::ptrdiff_t>(start[sigma + 1]));
            while (!col.empty()) {
                const std::uint32_t owner = pivot_owner[col.front()];
                if (owner == kNone) {
                    break;
                }
                add_column(col, reduced[owner], scratch);
            }
            if (col.empty()) {
                push_bar(pd, k, diam_k[sigma], kInfinity);
            } else {
                const std::uint32_t tau = orders[static_cast<std::size_t>(k + 1)].order[col.front()];
                pivot_owner[col.front()] = static_cast<std::uint32_t>(reduced.size());
                next_killed[tau] = 1;
                push_bar(pd, k, diam_k[sigma], diam_k1[tau]);
            }
            reduced.push_back(std::move(col));
        }
        killed.swap(next_killed);
    }
    sort_bars(pd);
    return pd;
}

PersistenceDiagram reduce_homology(const SimplicialComplex& sc, int max_dim) {
    PersistenceDiagram pd;
    pd.bars.resize(static_cast<std::size_t>(max_dim) + 1);

    std::vector<DimensionOrder> orders;
    for (int d = 0; d <= max_dim + 1; ++d) {
        orders.push_back(order_dimension(sc, d));
    }
    // paired[d][s]: simplex s of dimension d appears in a persistence pair
    std::vector<std::vector<char>> paired(static_cast<std::size_t>(max_dim) + 2);
    for (int d = 0; d <= max_dim + 1; ++d) {
        paired[static_cast<std::size_t>(d)].assign(sc.count(d), 0);
    }
    // positive[d][s]: the boundary column of s reduced to zero
    std::vector<std::vector<char>> positive(static_cast<std::size_t>(max_dim) + 2);
    positive[0].assign(sc.count(0), 1);

    Column scratch;
    for (int d = max_dim + 1; d >= 1; --d) {
        const std::size_t nd = sc.count(d);
        const auto width = static_cast<std::size_t>(d + 1);
        const std::vector<std::uint32_t> faces = face_table(sc, d);
        const auto& rank_f = orders[static_cast<std::size_t>(d - 1)].rank;
        const auto& order_f = orders[static_cast<std::size_t>(d - 1)].order;
        const auto& order_d = orders[static_cast<std::size_t>(d)].order;
        const auto& diam_d = sc.diameters(d);
        const auto& diam_f = sc.diameters(d - 1);
        auto& pos = positive[static_cast<std::size_t>(d)];
        pos.assign(nd, 0);

        std::vector<std::uint32_t> pivot_owner(sc.count(d - 1), kNone);
        std::vector<Column> reduced;
        reduced.reserve(nd);
        for (std::size_t r = 0; r < nd; ++r) {
            const std::uint32_t tau = order_d[r];
            Column col;
            // columns of simplices that are already paired as births are zero after reduction
            if (!(d <= max_dim && paired[static_cast<std::size_t>(d)][tau])) {
                col.reserve(width);
                for (std::size_t i = 0; i < width; ++i) {
                    col.push_back(rank_f[faces[tau * width + i]]);
                }
                std::sort(col.begin(), col.end());
                while (!col.empty()) {
                    const std::uint32_t owner = pivot_owner[col.back()];
                    if (owner == kNone) {
                        break;
                    }
                    add_column(col, reduced[owner], scratch);
                }
            }
            if (col.empty()) {
                pos[tau] = 1;
            } else {
                const std::uint32_t sigma = order_f[col.back()];
                pivot_owner[col.back()] = static_cast<std::uint32_t>(reduced.size());
                paired[static_cast<std::size_t>(d - 1)][sigma] = 1;
                paired[static_cast<std::size_t>(d)][tau] = 1;
                push_bar(pd, d - 1, diam_f[sigma], diam_d[tau]);
            }
            reduced.push_back(std::move(col));
        }
    }
    for (int k = 0; k <= max_dim; ++k) {
        const auto& diam = sc.diameters(k);
        for (std::size_t s = 0; s < sc.count(k); ++s) {
            if (positive[static_cast<std::size_t>(k)][s] && !paired[static_cast<std::size_t>(k)][s]) {
                push_bar(pd, k, diam[s], kInfinity);
            }
        }
    }
    sort_bars(pd);
    return pd;
}

}  // namespace

PersistenceDiagram filtration_persistence(const SimplicialComplex& sc, int max_dim, double max_eps,
                                          Reduction reduction) {
    if (max_dim < 0) {
        throw ArgumentError("max_dim must be >= 0");
    }
    if (sc.max_dim() < max_dim + 1) {
        throw ArgumentError("persistence in dimension " + std::to_string(max_dim) +
                            " needs simplices of dimension " + std::to_string(max_dim + 1));
    }
    PersistenceDiagram pd = reduction == Reduction::kCohomology ? reduce_cohomology(sc, max_dim)
                                                                : reduce_homology(sc, max_dim);
    pd.max_eps = max_eps;
    return pd;
}

PersistenceDiagram vr_persistence(const PointCloud& cloud, double max_eps, int max_dim,
                                  const PersistenceOptions& options) {
    if (!(max_eps > 0.0)) {
        throw ArgumentError("max_eps must be > 0");
    }
    if (max_dim < 0) {
        throw ArgumentError("max_dim must be >= 0");
    }
    const SimplicialComplex sc = build_vr(cloud, max_eps, max_dim + 1, options.simplex_cap);
    return filtration_persistence(sc, max_dim, max_eps, options.reduction);
}

EpsilonChoice select_epsilon(const PersistenceDiagram& diagram, double persistence_fraction) {
    if (!(persistence_fraction > 0.0 && persistence_fraction < 1.0)) {
        throw ArgumentError("persistence fraction must lie in (0, 1)");
    }
    if (diagram.empty()) {
        throw ArgumentError("persistence diagram is empty");
    }

    double largest_finite = 0.0;
    for (const auto& dim_bars : diagram.bars) {
        for (const PersistencePair& p : dim_bars) {
            largest_finite = std::max(largest_finite, p.is_infinite() ? p.birth : p.death);
        }
    }
    const double cap = std::isfinite(diagram.max_eps) ? diagram.max_eps : 2.0 * largest_finite;

    struct Bar {
        double birth;
        double death;
    };
    std::vector<Bar> bars;
    for (int d = 1; d <= diagram.max_dim(); ++d) {
        for (const PersistencePair& p : diagram.bars[static_cast<std::size_t>(d)]) {
            bars.push_back({p.birth, p.is_infinite() ? std::max(cap, p.birth) : p.death});
        }
    }

    EpsilonChoice choice;
    if (bars.empty()) {
        double shortest = kInfinity;
        double longest = 0.0;
        if (!diagram.bars.empty()) {
            for (const PersistencePair& p : diagram.bars[0]) {
                if (!p.is_infinite() && p.death > 0.0) {
                    shortest = std::min(shortest, p.death);
                    longest = std::max(longest, p.death);
                }
            }
        }
        if (!std::isfinite(shortest)) {
            throw ArgumentError("diagram has no finite bars to choose a scale from");
        }
        choice.epsilon = 0.5 * (shortest + longest);
        choice.fallback = true;
        return choice;
    }

    double longest = 0.0;
    for (const Bar& b : bars) {
        longest = std::max(longest, b.death - b.birth);
    }
    choice.threshold = persistence_fraction * longest;

    std::vector<double> events;
    for (const Bar& b : bars) {
        events.push_back(b.birth);
        events.push_back(b.death);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    bool found = false;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        const double mid = 0.5 * (events[i] + events[i + 1]);
        int score = 0;
        for (const Bar& b : bars) {
            if (b.birth < mid && mid <= b.death) {
                score += (b.death - b.birth) >= choice.threshold ? 1 : -1;
            }
        }
        if (!found || score > choice.score) {
            choice.score = score;
            choice.epsilon = mid;
            found = true;
        }
    }
    return choice;
}

}  // namespace tpcc
