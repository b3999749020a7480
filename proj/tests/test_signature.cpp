#include <doctest.h>

#include "oracles.hpp"
#include "tpcc/complex.hpp"
#include "tpcc/errors.hpp"
#include "tpcc/kmeans.hpp"
#include "tpcc/signature.hpp"

using namespace tpcc;

TEST_CASE("ari hand cases") {
    CHECK(adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK(adjusted_rand_index({3, 3, 5, 5, 7}, {3, 3, 5, 5, 7}) == doctest::Approx(1.0));
    CHECK(adjusted_rand_index({0, 0, 0, 0}, {0, 0, 1, 1}) == doctest::Approx(0.0));
    CHECK(adjusted_rand_index({1, 1, 1}, {2, 2, 2}) == 1.0);
    CHECK_THROWS_AS(adjusted_rand_index({0, 1}, {0}), ArgumentError);
}

TEST_CASE("ari against pair counting") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> ka(1, 5), kb(1, 5);
        const int ca = ka(rng), cb = kb(rng);
        std::uniform_int_distribution<int> la(0, ca - 1), lb(0, cb - 1);
        std::vector<int> a(60), b(60);
        for (std::size_t i = 0; i < 60; ++i) {
            a[i] = la(rng);
            b[i] = trial % 3 == 0 ? (a[i] * 7) % 11 : lb(rng);
        }
        const double ref = oracle::pair_count_ari(a, b);
        CHECK(adjusted_rand_index(a, b) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(adjusted_rand_index(b, a) == doctest::Approx(ref).epsilon(1e-12));
        std::vector<int> renamed = a;
        for (auto& x : renamed) x = 100 - 3 * x;
        CHECK(adjusted_rand_index(renamed, b) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("canonical labels") {
    CHECK(canonical_labels({5, 5, 2, 9, 2}) == std::vector<int>{0, 0, 1, 2, 1});
}

TEST_CASE("kmeans separates blobs") {
    Eigen::MatrixXd data(60, 2);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<int> truth;
    for (Eigen::Index i = 0; i < 60; ++i) {
        const int c = static_cast<int>(i % 3);
        data.row(i) << 5.0 * c + g(rng), (c == 1 ? 4.0 : 0.0) + g(rng);
        truth.push_back(c);
    }
    const auto res = kmeans(data, 3, 5, 0);
    CHECK(oracle::same_partition(res.labels, truth));
    CHECK(res.labels[0] == 0);
    CHECK(kmeans(data, 3, 5, 0).labels == res.labels);
    CHECK_THROWS_AS(kmeans(data, 0, 5, 0), ArgumentError);
    CHECK_THROWS_AS(kmeans(data, 61, 5, 0), ArgumentError);
}

TEST_CASE("signature blocks") {
    // path 0-1-2 plus an isolated vertex 3
    const auto sc = SimplicialComplex::from_simplices(4, {{0, 1}, {1, 2}, {3}}, 1);
    const SimplexLabels labels{{0, 0, 0, 0}, {1, 2}};
    const auto table = signatures(sc, labels, {0, 2});
    REQUIRE(table.rows.rows() == 4);
    REQUIRE(table.rows.cols() == 1 + 3);
    CHECK(table.block_offset == std::vector<Eigen::Index>{0, 1});
    // dim-0 block is one-hot
    CHECK(table.rows.col(0) == Eigen::Vector4d::Ones());
    Eigen::RowVector3d v0(0, 1, 0), v1(0, 0.5, 0.5), v2(0, 0, 1), v3(0, 0, 0);
    CHECK(table.rows.block(0, 1, 1, 3) == v0);
    CHECK(table.rows.block(1, 1, 1, 3) == v1);
    CHECK(table.rows.block(2, 1, 1, 3) == v2);
    CHECK(table.rows.block(3, 1, 1, 3) == v3);
    CHECK_THROWS_AS(signatures(sc, labels, {0}), ArgumentError);
}

TEST_CASE("wedge base point carries both loops") {
    // two 4-cycles sharing vertex 0
    const auto sc = SimplicialComplex::from_simplices(
        7, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}, {4, 5}, {5, 6}, {0, 6}}, 1);
    std::vector<int> edge_labels;
    for (std::size_t e = 0; e < sc.count(1); ++e) {
        const auto s = sc.simplex(1, e);
        edge_labels.push_back(std::max(s[0], s[1]) <= 3 ? 1 : 2);
    }
    const auto table = signatures(sc, {std::vector<int>(7, 0), edge_labels}, {0, 2});
    CHECK(table.rows(0, 2) == 0.5);
    CHECK(table.rows(0, 3) == 0.5);
    CHECK(table.rows(1, 2) == 1.0);
    CHECK(table.rows(5, 3) == 1.0);
}

TEST_CASE("every block sums to zero or one") {
    const Eigen::MatrixXd pts = oracle::random_cloud(40, 2, 3);
    const auto sc = build_vr(PointCloud(pts), 0.25, 2);
    std::mt19937_64 rng(7);
    SimplexLabels labels(3);
    const std::vector<int> counts{1, 3, 2};
    for (int d = 0; d <= 2; ++d) {
        std::uniform_int_distribution<int> pick(0, counts[static_cast<std::size_t>(d)]);
        for (std::size_t i = 0; i < sc.count(d); ++i) labels[static_cast<std::size_t>(d)].push_back(pick(rng));
    }
    const auto table = signatures(sc, labels, counts);
    for (Eigen::Index p = 0; p < table.rows.rows(); ++p) {
        for (int d = 0; d <= 2; ++d) {
            const Eigen::Index off = table.block_offset[static_cast<std::size_t>(d)];
            const double sum = table.rows.row(p).segment(off, counts[static_cast<std::size_t>(d)] + 1).sum();
            CHECK((std::abs(sum - 1.0) < 1e-12 || sum == 0.0));
        }
    }
}

TEST_CASE("permuting simplex cluster ids keeps the final partition") {
    const Eigen::MatrixXd pts = oracle::random_cloud(50, 2, 11);
    const auto sc = build_vr(PointCloud(pts), 0.3, 1);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 3);
    SimplexLabels labels{std::vector<int>(50, 0), {}};
    for (std::size_t i = 0; i < sc.count(1); ++i) labels[1].push_back(pick(rng));
    SimplexLabels permuted = labels;
    const int perm[] = {2, 0, 3, 1};
    for (auto& l : permuted[1]) l = perm[l];
    const auto a = final_cluster(signatures(sc, labels, {0, 3}), 4, 5);
    const auto b = final_cluster(signatures(sc, permuted, {0, 3}), 4, 5);
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(1.0));
}

TEST_CASE("final clustering") {
    SignatureTable same;
    same.rows = Eigen::MatrixXd::Ones(6, 3);
    same.cluster_count = {2};
    same.block_offset = {0};
    const auto labels = final_cluster(same, 2, 0);
    CHECK(std::all_of(labels.begin(), labels.end(), [&](int l) { return l == labels[0]; }));
    CHECK_THROWS_AS(final_cluster(same, 7, 0), ArgumentError);

    SignatureTable two;
    two.rows = Eigen::MatrixXd::Zero(8, 2);
    for (Eigen::Index i = 0; i < 8; ++i) two.rows(i, i < 4 ? 0 : 1) = 1.0;
    two.cluster_count = {1};
    two.block_offset = {0};
    const std::vector<int> expect{0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(final_cluster(two, 2, 0) == expect);
    CHECK(oracle::same_partition(final_cluster(two, 2, 0, FinalMethod::kSpectral), expect));
}
