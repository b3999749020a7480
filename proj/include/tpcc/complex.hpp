#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "tpcc/pointcloud.hpp"

namespace tpcc {

using VertexId = std::uint32_t;

/// Abstract simplicial complex on vertices 0..vertex_count-1.
///
/// Simplices of each dimension are stored as strictly increasing vertex tuples,
/// sorted lexicographically, in one flat array per dimension. The position of a
/// simplex in that array is its row/column id in boundary matrices and Laplacians.
/// Orientation is the one induced by the vertex order.
class SimplicialComplex {
public:
    /// Empty complex materialized up to `max_dim` (every dimension list empty).
    SimplicialComplex(Eigen::Index vertex_count, int max_dim);

    /// Closure of the given simplices, materialized up to `max_dim`.
    /// Simplices of dimension above `max_dim` contribute only their faces.
    static SimplicialComplex from_simplices(Eigen::Index vertex_count,
                                            const std::vector<std::vector<VertexId>>& simplices,
                                            int max_dim);

    Eigen::Index vertex_count() const noexcept { return vertex_count_; }
    /// Highest materialized dimension; lists up to it exist but may be empty.
    int max_dim() const noexcept { return static_cast<int>(flat_.size()) - 1; }

    std::size_t count(int dim) const;
    std::span<const VertexId> simplex(int dim, std::size_t i) const;
    /// Row id of the simplex with these (sorted) vertices, if present.
    std::optional<std::size_t> index_of(std::span<const VertexId> vertices) const;

    /// Filtration value (diameter) of every simplex of `dim`; zeros unless built from points.
    const std::vector<double>& diameters(int dim) const;

    std::size_t total_count() const;

    /// Appends a simplex. Callers must append in lexicographic order per dimension.
    void push_back(std::span<const VertexId> vertices, double diameter = 0.0);

    /// True when every face of every stored simplex is stored.
    bool is_closed() const;

private:
    Eigen::Index vertex_count_;
    std::vector<std::vector<VertexId>> flat_;
    std::vector<std::vector<double>> diameters_;
};

/// Vietoris-Rips complex: a simplex for every vertex set of dimension <= max_dim
/// whose pairwise distances are all strictly below `epsilon`.
///
/// Built by incremental expansion of common upper neighbourhoods. Throws
/// CapacityError when the simplex count would exceed `simplex_cap`.
SimplicialComplex build_vr(const PointCloud& cloud, double epsilon, int max_dim,
                           std::size_t simplex_cap = std::numeric_limits<std::size_t>::max());

/// Signed boundary operator from (n+1)-chains to n-chains.
///
/// Rows are the n-simplices, columns the (n+1)-simplices. Column sigma holds
/// (-1)^i at the row of the face that omits the i-th vertex of sigma.
struct BoundaryMatrix {
    int dim = 0;
    Eigen::SparseMatrix<int> matrix;
};

BoundaryMatrix boundary_matrix(const SimplicialComplex& sc, int n);

}  // namespace tpcc
