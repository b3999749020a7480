#pragma once

// Reference computations written from the definitions, sharing no code with the
// library: brute-force Rips enumeration, exact ranks over a prime field, union-find,
// pair-counting ARI.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Simplex = std::vector<std::uint32_t>;
using Simplices = std::vector<std::vector<Simplex>>;

/// Every vertex subset of size <= max_dim + 1 with all pairwise distances < eps,
/// per dimension, lexicographically sorted.
inline Simplices brute_rips(const Eigen::MatrixXd& pts, double eps, int max_dim) {
    const auto n = static_cast<std::uint32_t>(pts.rows());
    Simplices out(static_cast<std::size_t>(max_dim) + 1);
    auto close = [&](std::uint32_t a, std::uint32_t b) {
        return (pts.row(a) - pts.row(b)).norm() < eps;
    };
    // depth-first over increasing tuples, pruning on the first far pair
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, std::uint32_t from) -> void {
        if (!cur.empty()) {
            out[cur.size() - 1].push_back(cur);
        }
        if (static_cast<int>(cur.size()) == max_dim + 1) {
            return;
        }
        for (std::uint32_t v = from; v < n; ++v) {
            bool ok = true;
            for (auto u : cur) {
                ok = ok && close(u, v);
            }
            if (ok) {
                cur.push_back(v);
                self(self, v + 1);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0);
    for (auto& dim : out) {
        std::sort(dim.begin(), dim.end());
    }
    return out;
}

inline constexpr std::int64_t kPrime = 1'000'000'007;

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    b %= kPrime;
    while (e > 0) {
        if (e & 1) r = r * b % kPrime;
        b = b * b % kPrime;
        e >>= 1;
    }
    return r;
}

/// Rank over GF(p), p = 1e9+7. Equals the rational rank unless p divides torsion.
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m[0].size();
    int rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && (m[piv][c] % kPrime + kPrime) % kPrime == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        const std::int64_t inv = mod_pow((m[r][c] % kPrime + kPrime) % kPrime, kPrime - 2);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const std::int64_t f = (m[i][c] % kPrime + kPrime) % kPrime * inv % kPrime;
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                m[i][j] = ((m[i][j] - f * ((m[r][j] % kPrime + kPrime) % kPrime)) % kPrime + kPrime) %
                          kPrime;
            }
        }
        ++r;
        ++rank;
    }
    return rank;
}

/// Dense signed boundary from dimension n+1 to n, straight from the definition.
inline std::vector<std::vector<std::int64_t>> dense_boundary(const Simplices& s, int n) {
    const auto& lo = s[static_cast<std::size_t>(n)];
    const auto& hi = s[static_cast<std::size_t>(n) + 1];
    std::map<Simplex, std::size_t> row;
    for (std::size_t i = 0; i < lo.size(); ++i) row[lo[i]] = i;
    std::vector<std::vector<std::int64_t>> b(lo.size(), std::vector<std::int64_t>(hi.size(), 0));
    for (std::size_t j = 0; j < hi.size(); ++j) {
        for (std::size_t i = 0; i < hi[j].size(); ++i) {
            Simplex face = hi[j];
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
            b[row.at(face)][j] = (i % 2 == 0) ? 1 : -1;
        }
    }
    return b;
}

/// Betti numbers 0..max_dim from ranks; `s` must reach dimension max_dim + 1.
inline std::vector<int> betti_by_rank(const Simplices& s, int max_dim) {
    std::vector<int> ranks(static_cast<std::size_t>(max_dim) + 2, 0);
    for (int n = 0; n <= max_dim; ++n) {
        const auto& lo = s[static_cast<std::size_t>(n)];
        const auto& hi = s[static_cast<std::size_t>(n) + 1];
        ranks[static_cast<std::size_t>(n) + 1] =
            lo.empty() || hi.empty() ? 0 : rank_mod_p(dense_boundary(s, n));
    }
    std::vector<int> betti;
    for (int n = 0; n <= max_dim; ++n) {
        betti.push_back(static_cast<int>(s[static_cast<std::size_t>(n)].size()) -
                        ranks[static_cast<std::size_t>(n)] - ranks[static_cast<std::size_t>(n) + 1]);
    }
    return betti;
}

inline int components(const Eigen::MatrixXd& pts, double eps) {
    const auto n = static_cast<std::size_t>(pts.rows());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int count = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if ((pts.row(static_cast<Eigen::Index>(i)) - pts.row(static_cast<Eigen::Index>(j))).norm() <
                eps) {
                const auto a = find(i), b = find(j);
                if (a != b) {
                    parent[a] = b;
                    --count;
                }
            }
        }
    }
    return count;
}

/// ARI by counting agreeing pairs one by one.
inline double pair_count_ari(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double expected = in_a * in_b / pairs;
    const double top = 0.5 * (in_a + in_b);
    if (top == expected) return 1.0;
    return (both - expected) / (top - expected);
}

/// True when the two labelings induce the same partition.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it1, new1] = ab.emplace(a[i], b[i]);
        auto [it2, new2] = ba.emplace(b[i], a[i]);
        if (it1->second != b[i] || it2->second != a[i]) return false;
    }
    return true;
}

inline Eigen::MatrixXd random_cloud(int n, int dim, std::uint64_t seed, double spread = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, spread);
    Eigen::MatrixXd pts(n, dim);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) pts(i, j) = u(rng);
    }
    return pts;
}

/// Regular n-gon of circumradius r in the plane.
inline Eigen::MatrixXd polygon(int n, double r = 1.0) {
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * M_PI * i / n;
        pts(i, 0) = r * std::cos(t);
        pts(i, 1) = r * std::sin(t);
    }
    return pts;
}

/// Octahedron vertices: Rips at eps in (sqrt 2, 2) is the boundary 2-sphere.
inline Eigen::MatrixXd octahedron() {
    Eigen::MatrixXd pts(6, 3);
    pts << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    return pts;
}

}  // namespace oracle
