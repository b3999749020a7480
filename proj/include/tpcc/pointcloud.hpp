#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tpcc {

using Coordinates = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A finite set of points in R^n, one row per point, with optional ground-truth labels.
class PointCloud {
public:
    explicit PointCloud(Coordinates coords, std::optional<std::vector<int>> labels = std::nullopt);

    Eigen::Index size() const noexcept { return coords_.rows(); }
    Eigen::Index dimension() const noexcept { return coords_.cols(); }

    const Coordinates& coords() const noexcept { return coords_; }
    auto point(Eigen::Index i) const { return coords_.row(i); }

    bool has_labels() const noexcept { return labels_.has_value(); }
    /// Throws ArgumentError when the cloud carries no labels.
    const std::vector<int>& labels() const;

    double distance(Eigen::Index i, Eigen::Index j) const {
        return (coords_.row(i) - coords_.row(j)).norm();
    }

    /// Points (and labels) at the given indices, in the given order.
    PointCloud subset(std::span<const Eigen::Index> indices) const;

private:
    Coordinates coords_;
    std::optional<std::vector<int>> labels_;
};

struct CsvOptions {
    /// Interpret the final column as an integer label.
    bool label_column = false;
};

/// Reads comma-separated rows. Lines starting with '#' and blank lines are skipped.
PointCloud load_point_cloud(const std::filesystem::path& path, const CsvOptions& options = {});
PointCloud parse_point_cloud(std::istream& in, const CsvOptions& options = {});
void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud);

enum class ShapeKind { kSphere, kCircle, kTorus4d, kLineSegment, kCube, kWedgeOfSpheres };

ShapeKind parse_shape_kind(const std::string& name);
std::string to_string(ShapeKind kind);

enum class Sampling {
    kRandom,  ///< i.i.d. uniform on the shape
    kGrid,    ///< regular placement (polygon, torus grid, icosahedron, evenly spaced line)
};

/// Description of one sampled shape.
///
/// The shape lives in the affine subspace `center + span(basis)`. When `basis` is
/// empty the leading coordinate axes are used. Ambient dimension is `center.size()`.
///   sphere       2-sphere of `radius`, needs 3 basis vectors
///   circle       circle of `radius`, needs 2 basis vectors
///   torus4d      product of two circles of `radius`, needs 4 basis vectors;
///                grid sampling places round(sqrt(count))^2 points then drops
///                a `dropout` fraction of them
///   line-segment segment from `center` to `end`; random sampling is stratified
///                so that every 1/count-th of the segment holds exactly one point
///   cube         solid cube of edge `side` centred at `center`, needs 3 basis vectors
///   wedge        circles (`wedge_dims` entry 1) and 2-spheres (entry 2) glued at
///                `center`, triangulated with edge length `side`
struct ShapeSpec {
    ShapeKind kind = ShapeKind::kSphere;
    int count = 100;
    std::vector<double> center;
    std::vector<std::vector<double>> basis;
    double radius = 1.0;
    double side = 1.0;
    std::vector<double> end;
    std::vector<int> wedge_dims;
    Sampling sampling = Sampling::kRandom;
    double dropout = 0.0;
    double noise = 0.0;
};

/// Samples every spec in order and concatenates the results.
///
/// Each point is labelled with the index of the spec that produced it. Gaussian
/// noise with the spec's standard deviation is added to every coordinate after
/// sampling. Output is a deterministic function of (specs, seed).
PointCloud generate(std::span<const ShapeSpec> specs, std::uint64_t seed);

/// Bouquet of circles (entry 1) and 2-spheres (entry 2) sharing a base point at the origin.
///
/// Circles are regular `polygon_sides`-gons and 2-spheres are regular icosahedra,
/// both with edge length `edge`. Every part lives in its own coordinate block, so the
/// ambient dimension is the sum of (dim + 1) over the parts and points of different
/// parts are at least sqrt(2) * edge apart. The Rips complex at any scale in
/// (edge, sqrt(2) * edge) is exactly the union of the part triangulations.
/// Labels: 0 for the base point, i + 1 for the remaining points of part i.
PointCloud wedge_of_spheres(std::span<const int> sphere_dims, double edge = 1.0,
                            int polygon_sides = 12);

/// Min-max (farthest point) landmark selection with Euclidean distance.
///
/// The first landmark is drawn uniformly at random from `seed`; each following
/// landmark maximises the distance to the landmarks chosen so far. Ties go to
/// the smaller index.
std::vector<Eigen::Index> minmax_landmarks(const PointCloud& cloud, Eigen::Index k,
                                           std::uint64_t seed);

}  // namespace tpcc
