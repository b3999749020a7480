#include "tpcc/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "tpcc/errors.hpp"

namespace tpcc {

PointCloud::PointCloud(Coordinates coords, std::optional<std::vector<int>> labels)
    : coords_(std::move(coords)), labels_(std::move(labels)) {
    if (coords_.rows() < 1) {
        throw EmptyInputError("point cloud must contain at least one point");
    }
    if (coords_.cols() < 1) {
        throw ArgumentError("point cloud must have ambient dimension >= 1");
    }
    if (labels_ && static_cast<Eigen::Index>(labels_->size()) != coords_.rows()) {
        throw ArgumentError("label count " + std::to_string(labels_->size()) +
                            " does not match point count " + std::to_string(coords_.rows()));
    }
}

const std::vector<int>& PointCloud::labels() const {
    if (!labels_) {
        throw ArgumentError("point cloud has no labels");
    }
    return *labels_;
}

PointCloud PointCloud::subset(std::span<const Eigen::Index> indices) const {
    Coordinates out(static_cast<Eigen::Index>(indices.size()), coords_.cols());
    std::optional<std::vector<int>> out_labels;
    if (labels_) {
        out_labels.emplace();
        out_labels->reserve(indices.size());
    }
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const Eigen::Index i = indices[r];
        if (i < 0 || i >= size()) {
            throw ArgumentError("subset index " + std::to_string(i) + " out of range");
        }
        out.row(static_cast<Eigen::Index>(r)) = coords_.row(i);
        if (labels_) {
            out_labels->push_back((*labels_)[static_cast<std::size_t>(i)]);
        }
    }
    return PointCloud(std::move(out), std::move(out_labels));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& cell, std::size_t line) {
    const std::string t = trim(cell);
    if (t.empty()) {
        throw ParseError("line " + std::to_string(line) + ": empty cell");
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &consumed);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": non-numeric cell '" + t + "'");
    }
    if (consumed != t.size()) {
        throw ParseError("line " + std::to_string(line) + ": non-numeric cell '" + t + "'");
    }
    return value;
}

}  // namespace

PointCloud parse_point_cloud(std::istream& in, const CsvOptions& options) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(t);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(parse_double(cell, line_no));
        }
        if (t.back() == ',') {
            throw ParseError("line " + std::to_string(line_no) + ": empty cell");
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(width) + " columns, found " +
                              std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw EmptyInputError("no data rows in point cloud input");
    }
    const std::size_t dim = options.label_column ? width - 1 : width;
    if (dim < 1) {
        throw FormatError("label column requested but rows have a single column");
    }
    Coordinates coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    std::optional<std::vector<int>> labels;
    if (options.label_column) {
        labels.emplace();
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
        if (labels) {
            const double v = rows[r][dim];
            if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
                throw ParseError("row " + std::to_string(r) + ": label is not an integer");
            }
            labels->push_back(static_cast<int>(v));
        }
    }
    return PointCloud(std::move(coords), std::move(labels));
}

PointCloud load_point_cloud(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw ArgumentError("cannot open " + path.string());
    }
    return parse_point_cloud(in, options);
}

void write_point_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) {
        throw ArgumentError("cannot write " + path.string());
    }
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        for (Eigen::Index c = 0; c < cloud.dimension(); ++c) {
            if (c > 0) {
                out << ',';
            }
            out << cloud.coords()(i, c);
        }
        if (cloud.has_labels()) {
            out << ',' << cloud.labels()[static_cast<std::size_t>(i)];
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Synthetic shapes

ShapeKind parse_shape_kind(const std::string& name) {
    if (name == "sphere") return ShapeKind::kSphere;
    if (name == "circle") return ShapeKind::kCircle;
    if (name == "torus4d") return ShapeKind::kTorus4d;
    if (name == "line-segment") return ShapeKind::kLineSegment;
    if (name == "cube") return ShapeKind::kCube;
    if (name == "wedge-of-spheres") return ShapeKind::kWedgeOfSpheres;
    throw ConfigError("unknown shape kind '" + name + "'");
}

std::string to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::kSphere: return "sphere";
        case ShapeKind::kCircle: return "circle";
        case ShapeKind::kTorus4d: return "torus4d";
        case ShapeKind::kLineSegment: return "line-segment";
        case ShapeKind::kCube: return "cube";
        case ShapeKind::kWedgeOfSpheres: return "wedge-of-spheres";
    }
    return "unknown";
}

namespace {

using Rng = std::mt19937_64;
using Vec = Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Columns are the shape's basis directions in the ambient space.
Eigen::MatrixXd frame(const ShapeSpec& spec, int needed) {
    const auto dim = static_cast<Eigen::Index>(spec.center.size());
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, needed);
    if (spec.basis.empty()) {
        if (dim < needed) {
            throw ConfigError(to_string(spec.kind) + " needs ambient dimension >= " +
                              std::to_string(needed));
        }
        for (int i = 0; i < needed; ++i) {
            f(i, i) = 1.0;
        }
        return f;
    }
    if (static_cast<int>(spec.basis.size()) != needed) {
        throw ConfigError(to_string(spec.kind) + " needs " + std::to_string(needed) +
                          " basis vectors");
    }
    for (int i = 0; i < needed; ++i) {
        if (static_cast<Eigen::Index>(spec.basis[static_cast<std::size_t>(i)].size()) != dim) {
            throw ConfigError("basis vector dimension does not match center");
        }
        f.col(i) = to_vec(spec.basis[static_cast<std::size_t>(i)]);
    }
    return f;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Eigen::MatrixXd icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Eigen::MatrixXd v(12, 3);
    int r = 0;
    for (int a : {-1, 1}) {
        for (int b : {-1, 1}) {
            v.row(r++) << 0.0, a, b * phi;
            v.row(r++) << a, b * phi, 0.0;
            v.row(r++) << b * phi, 0.0, a;
        }
    }
    return v / 2.0;  // edge length 1
}

/// Unit-sphere directions for grid sampling of a 2-sphere.
Eigen::MatrixXd sphere_grid(int count) {
    if (count == 12) {
        Eigen::MatrixXd v = icosahedron();
        v.rowwise().normalize();
        return v;
    }
    Eigen::MatrixXd v(count, 3);
    if (count == 6) {
        v << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
        return v;
    }
    // Fibonacci lattice
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double t = golden * i;
        v.row(i) << r * std::cos(t), r * std::sin(t), z;
    }
    return v;
}

std::vector<Vec> sample_shape(const ShapeSpec& spec, Rng& rng) {
    if (spec.count < 1) {
        throw ConfigError("shape sample count must be >= 1");
    }
    if (spec.noise < 0.0) {
        throw ConfigError("noise standard deviation must be >= 0");
    }
    if (spec.center.empty()) {
        throw ConfigError("shape center must be given (it fixes the ambient dimension)");
    }
    const Vec c = to_vec(spec.center);
    std::vector<Vec> out;
    std::normal_distribution<double> gauss(0.0, 1.0);

    switch (spec.kind) {
        case ShapeKind::kSphere: {
            if (spec.radius <= 0.0) throw ConfigError("sphere radius must be > 0");
            const Eigen::MatrixXd f = frame(spec, 3);
            if (spec.sampling == Sampling::kGrid) {
                const Eigen::MatrixXd dirs = sphere_grid(spec.count);
                for (Eigen::Index i = 0; i < dirs.rows(); ++i) {
                    out.push_back(c + spec.radius * f * dirs.row(i).transpose());
                }
            } else {
                for (int i = 0; i < spec.count; ++i) {
                    Eigen::Vector3d g(gauss(rng), gauss(rng), gauss(rng));
                    while (g.norm() == 0.0) {
                        g = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
                    }
                    out.push_back(c + spec.radius * f * g.normalized());
                }
            }
            break;
        }
        case ShapeKind::kCircle: {
            if (spec.radius <= 0.0) throw ConfigError("circle radius must be > 0");
            const Eigen::MatrixXd f = frame(spec, 2);
            for (int i = 0; i < spec.count; ++i) {
                const double t = spec.sampling == Sampling::kGrid
                                     ? 2.0 * kPi * i / spec.count
                                     : 2.0 * kPi * uniform01(rng);
                out.push_back(c + spec.radius * f * Eigen::Vector2d(std::cos(t), std::sin(t)));
            }
            break;
        }
        case ShapeKind::kTorus4d: {
            if (spec.radius <= 0.0) throw ConfigError("torus radius must be > 0");
            if (spec.dropout < 0.0 || spec.dropout >= 1.0) {
                throw ConfigError("torus dropout must lie in [0, 1)");
            }
            const Eigen::MatrixXd f = frame(spec, 4);
            auto torus_point = [&](double a, double b) -> Vec {
                Eigen::Vector4d local(std::cos(a), std::sin(a), std::cos(b), std::sin(b));
                return c + spec.radius * f * local;
            };
            if (spec.sampling == Sampling::kGrid) {
                const int m = std::max(1, static_cast<int>(std::lround(std::sqrt(spec.count))));
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        const bool keep = uniform01(rng) >= spec.dropout;
                        if (keep) {
                            out.push_back(torus_point(2.0 * kPi * i / m, 2.0 * kPi * j / m));
                        }
                    }
                }
            } else {
                for (int i = 0; i < spec.count; ++i) {
                    out.push_back(torus_point(2.0 * kPi * uniform01(rng), 2.0 * kPi * uniform01(rng)));
                }
            }
            break;
        }
        case ShapeKind::kLineSegment: {
            if (spec.end.size() != spec.center.size()) {
                throw ConfigError("line-segment end must have the ambient dimension");
            }
            const Vec e = to_vec(spec.end);
            for (int i = 0; i < spec.count; ++i) {
                double t = 0.0;
                if (spec.sampling == Sampling::kGrid) {
                    t = spec.count == 1 ? 0.0 : static_cast<double>(i) / (spec.count - 1);
                } else {
                    t = (i + uniform01(rng)) / spec.count;
                }
                out.push_back(c + t * (e - c));
            }
            break;
        }
        case ShapeKind::kCube: {
            if (spec.side <= 0.0) throw ConfigError("cube side must be > 0");
            const Eigen::MatrixXd f = frame(spec, 3);
            for (int i = 0; i < spec.count; ++i) {
                Eigen::Vector3d u(uniform01(rng) - 0.5, uniform01(rng) - 0.5, uniform01(rng) - 0.5);
                out.push_back(c + spec.side * f * u);
            }
            break;
        }
        case ShapeKind::kWedgeOfSpheres: {
            const PointCloud w = wedge_of_spheres(spec.wedge_dims, spec.side);
            if (w.dimension() > c.size()) {
                throw ConfigError("wedge-of-spheres needs ambient dimension >= " +
                                  std::to_string(w.dimension()));
            }
            for (Eigen::Index i = 0; i < w.size(); ++i) {
                Vec p = c;
                p.head(w.dimension()) += w.point(i).transpose();
                out.push_back(std::move(p));
            }
            break;
        }
    }

    if (spec.noise > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise);
        for (Vec& p : out) {
            for (Eigen::Index k = 0; k < p.size(); ++k) {
                p(k) += noise(rng);
            }
        }
    }
    return out;
}

}  // namespace

PointCloud generate(std::span<const ShapeSpec> specs, std::uint64_t seed) {
    if (specs.empty()) {
        throw ConfigError("at least one shape spec is required");
    }
    Rng rng(seed);
    std::vector<Vec> points;
    std::vector<int> labels;
    const std::size_t dim = specs.front().center.size();
    for (std::size_t s = 0; s < specs.size(); ++s) {
        if (specs[s].center.size() != dim) {
            throw ConfigError("all shape specs must share the ambient dimension");
        }
        for (Vec& p : sample_shape(specs[s], rng)) {
            points.push_back(std::move(p));
            labels.push_back(static_cast<int>(s));
        }
    }
    if (points.empty()) {
        throw ConfigError("shape specs produced no points");
    }
    Coordinates coords(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < points.size(); ++i) {
        coords.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    }
    return PointCloud(std::move(coords), std::move(labels));
}

PointCloud wedge_of_spheres(std::span<const int> sphere_dims, double edge, int polygon_sides) {
    if (sphere_dims.size() < 2) {
        throw ConfigError("a wedge needs at least two spheres");
    }
    if (edge <= 0.0 || polygon_sides < 4) {
        throw ConfigError("wedge needs edge > 0 and polygons with at least 4 sides");
    }
    Eigen::Index dim = 0;
    for (int d : sphere_dims) {
        if (d != 1 && d != 2) {
            throw ConfigError("wedge parts must be circles (1) or 2-spheres (2)");
        }
        dim += d + 1;
    }
    std::vector<Vec> points{Vec::Zero(dim)};
    std::vector<int> labels{0};
    Eigen::Index offset = 0;
    for (std::size_t part = 0; part < sphere_dims.size(); ++part) {
        const int d = sphere_dims[part];
        if (d == 1) {
            const double radius = edge / (2.0 * std::sin(kPi / polygon_sides));
            for (int i = 1; i < polygon_sides; ++i) {
                const double t = 2.0 * kPi * i / polygon_sides;
                Vec p = Vec::Zero(dim);
                p(offset) = radius * (std::cos(t) - 1.0);
                p(offset + 1) = radius * std::sin(t);
                points.push_back(std::move(p));
                labels.push_back(static_cast<int>(part) + 1);
            }
        } else {
            const Eigen::MatrixXd ico = icosahedron() * edge;
            const Eigen::RowVectorXd base = ico.row(0);
            for (Eigen::Index i = 1; i < ico.rows(); ++i) {
                Vec p = Vec::Zero(dim);
                p.segment(offset, 3) = (ico.row(i) - base).transpose();
                points.push_back(std::move(p));
                labels.push_back(static_cast<int>(part) + 1);
            }
        }
        offset += d + 1;
    }
    Coordinates coords(static_cast<Eigen::Index>(points.size()), dim);
    for (std::size_t i = 0; i < points.size(); ++i) {
        coords.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    }
    return PointCloud(std::move(coords), std::move(labels));
}

std::vector<Eigen::Index> minmax_landmarks(const PointCloud& cloud, Eigen::Index k,
                                           std::uint64_t seed) {
    const Eigen::Index n = cloud.size();
    if (k < 1 || k > n) {
        throw ArgumentError("landmark count " + std::to_string(k) + " outside [1, " +
                            std::to_string(n) + "]");
    }
    Rng rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    std::vector<Eigen::Index> landmarks{pick(rng)};
    landmarks.reserve(static_cast<std::size_t>(k));
    Eigen::VectorXd min_dist = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    while (static_cast<Eigen::Index>(landmarks.size()) < k) {
        const Eigen::Index last = landmarks.back();
        min_dist = min_dist.cwiseMin(
            (cloud.coords().rowwise() - cloud.point(last)).rowwise().norm());
        min_dist(last) = -1.0;
        Eigen::Index best = 0;
        min_dist.maxCoeff(&best);
        landmarks.push_back(best);
    }
    return landmarks;
}

}  // namespace tpcc
