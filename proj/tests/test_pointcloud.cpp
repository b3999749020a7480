#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tpcc/errors.hpp"
#include "tpcc/pointcloud.hpp"

using namespace tpcc;

TEST_CASE("csv parsing") {
    std::istringstream in("# x,y,label\n0,1,2\n\n3.5,-4,0\n");
    const PointCloud pc = parse_point_cloud(in, {true});
    CHECK(pc.size() == 2);
    CHECK(pc.dimension() == 2);
    CHECK(pc.coords()(1, 0) == 3.5);
    CHECK(pc.coords()(1, 1) == -4.0);
    CHECK(pc.labels() == std::vector<int>{2, 0});

    std::istringstream plain("1,2,3\n4,5,6\n");
    const PointCloud p3 = parse_point_cloud(plain);
    CHECK(p3.dimension() == 3);
    CHECK_FALSE(p3.has_labels());
    CHECK_THROWS_AS(p3.labels(), ArgumentError);
}

TEST_CASE("csv errors") {
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(parse_point_cloud(ragged), FormatError);
    std::istringstream text("1,a\n");
    CHECK_THROWS_AS(parse_point_cloud(text), ParseError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_point_cloud(empty), EmptyInputError);
    std::istringstream frac("1,2.5\n");
    CHECK_THROWS_AS(parse_point_cloud(frac, {true}), ParseError);
}

TEST_CASE("csv round trip") {
    const auto path = std::filesystem::temp_directory_path() / "tpcc_roundtrip.csv";
    Coordinates c(2, 3);
    c << 0.1, 1.0 / 3.0, -2, 1e-12, 5, 6;
    const PointCloud pc(c, std::vector<int>{4, 7});
    write_point_cloud(path, pc);
    const PointCloud back = load_point_cloud(path, {true});
    CHECK(back.coords() == pc.coords());
    CHECK(back.labels() == pc.labels());
    std::filesystem::remove(path);
}

TEST_CASE("circle sample lies on the circle") {
    ShapeSpec s;
    s.kind = ShapeKind::kCircle;
    s.count = 100;
    s.center = {0, 0};
    const PointCloud pc = generate(std::span<const ShapeSpec>(&s, 1), 3);
    REQUIRE(pc.size() == 100);
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        CHECK(std::abs(pc.point(i).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("zero-noise sphere radius") {
    for (auto sampling : {Sampling::kRandom, Sampling::kGrid}) {
        ShapeSpec s;
        s.kind = ShapeKind::kSphere;
        s.count = 300;
        s.radius = 2.5;
        s.center = {1, -1, 3};
        s.sampling = sampling;
        const PointCloud pc = generate(std::span<const ShapeSpec>(&s, 1), 11);
        const Eigen::RowVector3d center(1, -1, 3);
        for (Eigen::Index i = 0; i < pc.size(); ++i) {
            CHECK(std::abs((pc.point(i) - center).norm() - 2.5) < 1e-12);
        }
    }
}

TEST_CASE("generate labels, determinism and noise") {
    std::vector<ShapeSpec> specs(3);
    specs[0].kind = ShapeKind::kSphere;
    specs[0].count = 50;
    specs[0].center = {0, 0, 0};
    specs[1].kind = ShapeKind::kLineSegment;
    specs[1].count = 10;
    specs[1].center = {0, 0, 0};
    specs[1].end = {1, 1, 1};
    specs[2].kind = ShapeKind::kCube;
    specs[2].count = 20;
    specs[2].center = {5, 5, 5};
    for (auto& s : specs) s.noise = 0.1;

    const PointCloud a = generate(specs, 42);
    const PointCloud b = generate(specs, 42);
    const PointCloud c = generate(specs, 43);
    CHECK(a.coords() == b.coords());
    CHECK(a.coords() != c.coords());
    REQUIRE(a.size() == 80);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const int expect = i < 50 ? 0 : (i < 60 ? 1 : 2);
        CHECK(a.labels()[static_cast<std::size_t>(i)] == expect);
    }
}

TEST_CASE("stratified segment") {
    ShapeSpec s;
    s.kind = ShapeKind::kLineSegment;
    s.count = 8;
    s.center = {0, 0};
    s.end = {8, 0};
    const PointCloud pc = generate(std::span<const ShapeSpec>(&s, 1), 5);
    std::vector<int> per_bin(8, 0);
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        CHECK(pc.point(i)(1) == 0.0);
        per_bin[static_cast<std::size_t>(std::min(7.0, std::floor(pc.point(i)(0))))]++;
    }
    CHECK(per_bin == std::vector<int>(8, 1));
}

TEST_CASE("torus grid with dropout") {
    ShapeSpec s;
    s.kind = ShapeKind::kTorus4d;
    s.count = 400;
    s.center = {0, 0, 0, 0};
    s.sampling = Sampling::kGrid;
    s.dropout = 0.2;
    const PointCloud pc = generate(std::span<const ShapeSpec>(&s, 1), 1);
    // each grid node is dropped independently
    CHECK(pc.size() > 260);
    CHECK(pc.size() < 380);
    for (Eigen::Index i = 0; i < pc.size(); ++i) {
        CHECK(std::abs(pc.point(i).head(2).norm() - 1.0) < 1e-12);
        CHECK(std::abs(pc.point(i).tail(2).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("shape spec errors") {
    CHECK_THROWS_AS(parse_shape_kind("klein-bottle"), ConfigError);
    CHECK(parse_shape_kind(to_string(ShapeKind::kCube)) == ShapeKind::kCube);
    ShapeSpec s;
    s.center = {0, 0, 0};
    s.count = 0;
    CHECK_THROWS_AS(generate(std::span<const ShapeSpec>(&s, 1), 0), ConfigError);
    s.count = 5;
    s.radius = -1;
    CHECK_THROWS_AS(generate(std::span<const ShapeSpec>(&s, 1), 0), ConfigError);
    s.radius = 1;
    s.noise = -0.1;
    CHECK_THROWS_AS(generate(std::span<const ShapeSpec>(&s, 1), 0), ConfigError);
    s.noise = 0;
    s.center = {0, 0};
    CHECK_THROWS_AS(generate(std::span<const ShapeSpec>(&s, 1), 0), ConfigError);
    CHECK_THROWS_AS(generate(std::span<const ShapeSpec>(), 0), ConfigError);
}

TEST_CASE("min-max landmarks replay") {
    const PointCloud pc(oracle::random_cloud(120, 3, 9));
    const auto lm = minmax_landmarks(pc, 30, 4);
    REQUIRE(lm.size() == 30);
    std::vector<Eigen::Index> sorted = lm;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    // each pick is at least as far from the earlier picks as any other point
    for (std::size_t step = 1; step < lm.size(); ++step) {
        auto dist_to_prefix = [&](Eigen::Index x) {
            double best = INFINITY;
            for (std::size_t j = 0; j < step; ++j) best = std::min(best, pc.distance(x, lm[j]));
            return best;
        };
        const double chosen = dist_to_prefix(lm[step]);
        for (Eigen::Index x = 0; x < pc.size(); ++x) {
            CHECK(chosen >= dist_to_prefix(x));
        }
    }
    CHECK(minmax_landmarks(pc, 30, 4) == lm);
    CHECK_THROWS_AS(minmax_landmarks(pc, 0, 0), ArgumentError);
    CHECK_THROWS_AS(minmax_landmarks(pc, 121, 0), ArgumentError);
}

TEST_CASE("wedge of spheres layout") {
    const std::vector<int> parts{1, 2};
    const PointCloud pc = wedge_of_spheres(parts);
    CHECK(pc.dimension() == 5);
    CHECK(pc.size() == 1 + 11 + 11);
    CHECK(pc.labels()[0] == 0);
    CHECK(pc.point(0).norm() == 0.0);
    const std::vector<int> bad{3, 1};
    CHECK_THROWS_AS(wedge_of_spheres(bad), ConfigError);
}
