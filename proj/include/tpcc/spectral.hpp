#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "tpcc/complex.hpp"

namespace tpcc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// L_n = B_{n-1}^T B_{n-1} + B_n B_n^T over the lexicographic basis of n-simplices.
struct HodgeLaplacian {
    int dim = 0;
    SparseMatrix matrix;
};

/// Needs dimension n + 1 materialized. An empty dimension gives a 0x0 matrix.
HodgeLaplacian hodge_laplacian(const SimplicialComplex& sc, int n);

struct KernelOptions {
    /// Eigenvalues below tol * (max diagonal entry) count as zero.
    double tol = 1e-8;
    /// Number of zero eigenvalues known in advance, e.g. from persistence.
    std::optional<int> expected_dim;
    /// Matrices up to this size use a dense eigensolver.
    Eigen::Index dense_limit = 500;
    /// Above this size the shifted solves use conjugate gradients, not a factorization.
    Eigen::Index iterative_limit = 20000;
    int max_iterations = 200;
    std::uint64_t seed = 0;
};

/// Orthonormal basis of ker L_n, one column per harmonic vector.
struct KernelBasis {
    int dim = 0;
    Eigen::MatrixXd vectors;
    double scale = 0.0;
    double threshold = 0.0;
    /// Eigenvalues of the returned vectors, ascending.
    Eigen::VectorXd eigenvalues;
    /// Smallest eigenvalue above the kernel when it was computed, otherwise NaN.
    double next_eigenvalue = 0.0;
    /// max_i ||L v_i||_2.
    double max_residual = 0.0;

    int betti() const noexcept { return static_cast<int>(vectors.cols()); }
};

/// Throws AmbiguousKernelError when `expected_dim` is given and the spectrum has no
/// gap after it, SolverError when the iterative solver does not converge.
KernelBasis kernel_basis(const HodgeLaplacian& laplacian, const KernelOptions& options = {});

/// Dimension of ker L_n.
int betti(const SimplicialComplex& sc, int n, double tol = 1e-8);

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// The `count` smallest eigenpairs of a symmetric positive semi-definite matrix.
Eigenpairs smallest_eigenpairs(const SparseMatrix& matrix, Eigen::Index count,
                               std::uint64_t seed = 0, Eigen::Index dense_limit = 2000);

}  // namespace tpcc
