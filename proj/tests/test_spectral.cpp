#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpcc/complex.hpp"
#include "tpcc/errors.hpp"
#include "tpcc/spectral.hpp"

using namespace tpcc;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

Eigen::MatrixXd to_double(const std::vector<std::vector<std::int64_t>>& b, Eigen::Index rows,
                          Eigen::Index cols) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = static_cast<double>(b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    return m;
}

/// Largest sine of the principal angles between two column spans.
double span_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.cols() != b.cols()) return 1.0;
    if (a.cols() == 0) return 0.0;
    const Eigen::MatrixXd proj = b - a * (a.transpose() * b);
    return Eigen::JacobiSVD<Eigen::MatrixXd>(proj).singularValues()(0);
}

SimplicialComplex cycle(int n) {
    std::vector<std::vector<VertexId>> edges;
    for (int i = 0; i < n; ++i) {
        VertexId a = static_cast<VertexId>(i), b = static_cast<VertexId>((i + 1) % n);
        edges.push_back({std::min(a, b), std::max(a, b)});
    }
    return SimplicialComplex::from_simplices(n, edges, 2);
}

SimplicialComplex octahedron() { return build_vr(PointCloud(oracle::octahedron()), 1.5, 3); }

void check_basis(const KernelBasis& kb, const SparseMatrix& lap) {
    const Eigen::Index b = kb.vectors.cols();
    CHECK((kb.vectors.transpose() * kb.vectors - Eigen::MatrixXd::Identity(b, b)).cwiseAbs().maxCoeff() <=
          1e-10);
    for (Eigen::Index i = 0; i < b; ++i) {
        CHECK((lap * kb.vectors.col(i)).norm() <= 1e-8 * kb.scale);
    }
}

}  // namespace

TEST_CASE("path graph laplacian") {
    const auto sc = SimplicialComplex::from_simplices(3, {{0, 1}, {1, 2}}, 1);
    Eigen::Matrix3d expect;
    expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
    CHECK(dense(hodge_laplacian(sc, 0).matrix) == expect);
}

TEST_CASE("filled triangle edge laplacian") {
    const auto sc = SimplicialComplex::from_simplices(3, {{0, 1, 2}}, 2);
    const Eigen::MatrixXd l1 = dense(hodge_laplacian(sc, 1).matrix);
    CHECK(l1.diagonal() == Eigen::Vector3d::Constant(3.0));
    // the triangle is contractible
    CHECK(betti(sc, 1) == 0);
}

TEST_CASE("laplacian matches the formula on random complexes") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Eigen::MatrixXd pts = oracle::random_cloud(12, 3, 40 + seed);
        const auto sc = build_vr(PointCloud(pts), 0.6, 3);
        const auto ref = oracle::brute_rips(pts, 0.6, 3);
        for (int n = 0; n <= 2; ++n) {
            const auto sn = static_cast<Eigen::Index>(sc.count(n));
            const Eigen::MatrixXd up =
                to_double(oracle::dense_boundary(ref, n), sn, static_cast<Eigen::Index>(sc.count(n + 1)));
            Eigen::MatrixXd expect = up * up.transpose();
            if (n > 0) {
                const Eigen::MatrixXd down = to_double(oracle::dense_boundary(ref, n - 1),
                                                       static_cast<Eigen::Index>(sc.count(n - 1)), sn);
                expect += down.transpose() * down;
            }
            const Eigen::MatrixXd got = dense(hodge_laplacian(sc, n).matrix);
            CHECK((got - expect).cwiseAbs().maxCoeff() == 0.0);
            CHECK((got - got.transpose()).cwiseAbs().maxCoeff() == 0.0);
            if (sn > 0) {
                CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(got).eigenvalues().minCoeff() >= -1e-9);
            }
        }
    }
}

TEST_CASE("top dimension without cofaces") {
    const auto sc = cycle(5);
    const Eigen::MatrixXd l1 = dense(hodge_laplacian(sc, 1).matrix);
    const Eigen::MatrixXd b0 = Eigen::MatrixXd(boundary_matrix(sc, 0).matrix.cast<double>());
    CHECK(l1 == b0.transpose() * b0);
}

TEST_CASE("graph kernel spans component indicators") {
    const auto sc = SimplicialComplex::from_simplices(7, {{0, 1}, {1, 2}, {3, 4}, {5, 6}, {4, 5}}, 1);
    // components {0,1,2}, {3,4,5,6}
    const auto lap = hodge_laplacian(sc, 0);
    const auto kb = kernel_basis(lap);
    REQUIRE(kb.betti() == 2);
    Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(7, 2);
    ind.block(0, 0, 3, 1).setConstant(1.0 / std::sqrt(3.0));
    ind.block(3, 1, 4, 1).setConstant(0.5);
    CHECK(span_distance(kb.vectors, ind) < 1e-10);
    check_basis(kb, lap.matrix);
}

TEST_CASE("four-cycle harmonic edge flow") {
    const auto sc = cycle(4);
    const auto lap = hodge_laplacian(sc, 1);
    const auto kb = kernel_basis(lap);
    REQUIRE(kb.betti() == 1);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(kb.vectors(i, 0)) == doctest::Approx(0.5));
    }
    // edges {0,1},{0,3},{1,2},{2,3}: going round 0-1-2-3-0 traverses {0,3} backwards
    const Eigen::Vector4d v = kb.vectors.col(0) * (kb.vectors(0, 0) > 0 ? 1.0 : -1.0);
    CHECK(v(1) == doctest::Approx(-0.5));
    CHECK(v(2) == doctest::Approx(0.5));
    CHECK(v(3) == doctest::Approx(0.5));
    check_basis(kb, lap.matrix);
}

TEST_CASE("canonical betti numbers") {
    CHECK(betti(octahedron(), 0) == 1);
    CHECK(betti(octahedron(), 1) == 0);
    CHECK(betti(octahedron(), 2) == 1);
    CHECK(betti(SimplicialComplex::from_simplices(4, {{0, 1}, {2, 3}}, 1), 0) == 2);
    CHECK(betti(cycle(4), 1) == 1);
    CHECK(betti(cycle(4), 0) == 1);
}

TEST_CASE("empty laplacian") {
    const auto sc = SimplicialComplex::from_simplices(3, {{0}, {1}, {2}}, 2);
    const auto lap = hodge_laplacian(sc, 1);
    CHECK(lap.matrix.rows() == 0);
    CHECK(kernel_basis(lap).betti() == 0);
    CHECK_THROWS_AS(hodge_laplacian(sc, 2), ArgumentError);
    CHECK_THROWS_AS(hodge_laplacian(sc, -1), ArgumentError);
}

TEST_CASE("iterative solver agrees with the dense one") {
    // large enough for the sparse path, with a few holes at this scale
    const Eigen::MatrixXd pts = oracle::random_cloud(220, 2, 9, 4.0);
    const auto sc = build_vr(PointCloud(pts), 0.42, 2);
    for (int n = 0; n <= 1; ++n) {
        const auto lap = hodge_laplacian(sc, n);
        KernelOptions dense_opts;
        dense_opts.dense_limit = 100000;
        KernelOptions sparse_opts;
        sparse_opts.dense_limit = 10;
        sparse_opts.seed = 3;
        const auto a = kernel_basis(lap, dense_opts);
        const auto b = kernel_basis(lap, sparse_opts);
        REQUIRE(a.betti() == b.betti());
        CHECK(span_distance(a.vectors, b.vectors) < 1e-8);
        check_basis(a, lap.matrix);
        check_basis(b, lap.matrix);

        sparse_opts.expected_dim = a.betti();
        sparse_opts.seed = 17;
        const auto c = kernel_basis(lap, sparse_opts);
        CHECK(span_distance(a.vectors, c.vectors) < 1e-8);

        // conjugate gradients in place of the factorization
        sparse_opts.iterative_limit = 10;
        const auto d = kernel_basis(lap, sparse_opts);
        CHECK(span_distance(a.vectors, d.vectors) < 1e-8);
        check_basis(d, lap.matrix);
        sparse_opts.expected_dim.reset();
        CHECK(kernel_basis(lap, sparse_opts).betti() == a.betti());
    }
}

TEST_CASE("wrong expected dimension fails the gap check") {
    const auto sc = cycle(6);
    const auto lap = hodge_laplacian(sc, 0);
    KernelOptions opts;
    opts.expected_dim = 2;
    CHECK_THROWS_AS(kernel_basis(lap, opts), AmbiguousKernelError);
    opts.dense_limit = 2;
    CHECK_THROWS_AS(kernel_basis(lap, opts), AmbiguousKernelError);
    opts.expected_dim = 1;
    CHECK(kernel_basis(lap, opts).betti() == 1);
}

TEST_CASE("kernel dimension is invariant under vertex relabelling") {
    const Eigen::MatrixXd pts = oracle::random_cloud(40, 3, 21);
    std::vector<Eigen::Index> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(5);
    std::shuffle(perm.begin(), perm.end(), rng);
    const PointCloud a(pts);
    const PointCloud b = a.subset(perm);
    for (double eps : {0.25, 0.35, 0.45}) {
        const auto sa = build_vr(a, eps, 3);
        const auto sb = build_vr(b, eps, 3);
        for (int n = 0; n <= 2; ++n) CHECK(betti(sa, n) == betti(sb, n));
    }
}

TEST_CASE("smallest eigenpairs") {
    const Eigen::MatrixXd pts = oracle::random_cloud(150, 2, 2);
    const auto sc = build_vr(PointCloud(pts), 0.2, 1);
    const auto lap = hodge_laplacian(sc, 0).matrix;
    const auto dense_pairs = smallest_eigenpairs(lap, 4, 0);
    const auto sparse_pairs = smallest_eigenpairs(lap, 4, 0, 10);
    CHECK((dense_pairs.values - sparse_pairs.values).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(smallest_eigenpairs(lap, 151, 0), ArgumentError);
}
