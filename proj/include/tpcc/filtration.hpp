#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "tpcc/complex.hpp"
#include "tpcc/pointcloud.hpp"

namespace tpcc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
    double birth = 0.0;
    double death = kInfinity;

    bool is_infinite() const noexcept { return death == kInfinity; }
    /// A bar is alive in the complex at scale eps when birth < eps <= death.
    bool alive_at(double eps) const noexcept { return birth < eps && eps <= death; }
};

/// Bars per homology dimension. Pairs with zero persistence are not stored.
struct PersistenceDiagram {
    std::vector<std::vector<PersistencePair>> bars;
    /// Filtration cut-off; bars still alive there are reported as infinite.
    double max_eps = kInfinity;

    int max_dim() const noexcept { return static_cast<int>(bars.size()) - 1; }
    std::size_t alive_count(int dim, double eps) const;
    std::size_t infinite_count(int dim) const;
    bool empty() const;
};

enum class Reduction {
    kCohomology,        ///< coboundary columns, low dimensions first, with clearing
    kHomologyClearing,  ///< boundary columns, high dimensions first, with clearing
};

struct PersistenceOptions {
    std::size_t simplex_cap = 5'000'000;
    Reduction reduction = Reduction::kCohomology;
};

/// Persistent homology over GF(2) of the Rips filtration truncated below `max_eps`,
/// homology dimensions 0..max_dim. Simplices are ordered by (diameter, dimension,
/// lexicographic). Throws CapacityError when the filtration exceeds the cap.
PersistenceDiagram vr_persistence(const PointCloud& cloud, double max_eps, int max_dim,
                                  const PersistenceOptions& options = {});

/// Same reduction on an already built complex, using its stored diameters as
/// filtration values. Needs dimension max_dim + 1 materialized.
PersistenceDiagram filtration_persistence(const SimplicialComplex& sc, int max_dim,
                                          double max_eps = kInfinity,
                                          Reduction reduction = Reduction::kCohomology);

struct EpsilonChoice {
    double epsilon = 0.0;
    int score = 0;
    /// Bars with persistence at or above this count as features.
    double threshold = 0.0;
    /// No bars in dimensions >= 1; epsilon is the midpoint of the 0-dimensional range.
    bool fallback = false;
};

/// Picks the scale that maximises (#long bars alive) - (#short bars alive) over
/// dimensions >= 1, where "long" means persistence >= fraction * the largest
/// persistence. Returns the midpoint of the best interval; ties go to the smaller
/// scale. Infinite bars are cut at the diagram's max_eps when measuring persistence.
EpsilonChoice select_epsilon(const PersistenceDiagram& diagram, double persistence_fraction = 0.3);

}  // namespace tpcc
