#include "tpcc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#ifdef TPCC_WITH_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "tpcc/errors.hpp"

namespace tpcc {

HodgeLaplacian hodge_laplacian(const SimplicialComplex& sc, int n) {
    if (n < 0) {
        throw ArgumentError("Laplacian dimension must be >= 0");
    }
    if (n + 1 > sc.max_dim()) {
        throw ArgumentError("Laplacian L_" + std::to_string(n) + " needs dimension " +
                            std::to_string(n + 1) + " materialized");
    }
    const auto size = static_cast<Eigen::Index>(sc.count(n));
    HodgeLaplacian out{n, SparseMatrix(size, size)};
    if (size == 0) {
        return out;
    }
    const SparseMatrix up = boundary_matrix(sc, n).matrix.cast<double>();
    SparseMatrix lap = up * SparseMatrix(up.transpose());
    if (n > 0) {
        const SparseMatrix down = boundary_matrix(sc, n - 1).matrix.cast<double>();
        lap += SparseMatrix(down.transpose()) * down;
    }
    lap.prune(0.0);
    lap.makeCompressed();
    out.matrix = std::move(lap);
    return out;
}

namespace {

double max_diagonal(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        best = std::max(best, m.coeff(i, i));
    }
    return best;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& block) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
    return qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), block.cols());
}

Eigen::MatrixXd gaussian_block(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd block(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            block(i, j) = normal(rng);
        }
    }
    return block;
}

/// Block inverse iteration on (L + shift I) with Rayleigh-Ritz on L.
class ShiftInvertSolver {
public:
    ShiftInvertSolver(const SparseMatrix& matrix, double shift,
                      Eigen::Index iterative_limit = std::numeric_limits<Eigen::Index>::max())
        : matrix_(matrix), shifted_(matrix) {
        for (Eigen::Index i = 0; i < shifted_.rows(); ++i) {
            shifted_.coeffRef(i, i) += shift;
        }
        if (shifted_.rows() > iterative_limit) {
            // factor fill-in grows too fast on large higher Laplacians, whose
            // nonzero spectrum is well conditioned enough for CG
            cg_.setTolerance(1e-12);
            cg_.setMaxIterations(static_cast<Eigen::Index>(
                std::min<double>(20000.0, 10.0 * static_cast<double>(shifted_.rows()))));
            cg_.compute(shifted_);
            use_cg_ = true;
            return;
        }
        factorize();
    }

    struct Ritz {
        Eigen::VectorXd values;
        Eigen::MatrixXd vectors;
        Eigen::VectorXd residuals;
    };

    void start(Eigen::Index block, std::uint64_t seed) {
        basis_ = orthonormalize(gaussian_block(matrix_.rows(), block, seed));
        iterations_ = 0;
    }

    Ritz step() {
        ++iterations_;
        const Eigen::MatrixXd next = solve(basis_);
        basis_ = orthonormalize(next);
        const Eigen::MatrixXd image = matrix_ * basis_;
        Eigen::MatrixXd projected = basis_.transpose() * image;
        projected = 0.5 * (projected + projected.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projected);
        Ritz ritz;
        ritz.values = eig.eigenvalues();
        ritz.vectors = basis_ * eig.eigenvectors();
        const Eigen::MatrixXd residual =
            image * eig.eigenvectors() - ritz.vectors * ritz.values.asDiagonal();
        ritz.residuals = residual.colwise().norm().transpose();
        basis_ = ritz.vectors;
        return ritz;
    }

    int iterations() const noexcept { return iterations_; }

private:
    void factorize() {
        use_cg_ = false;
#ifdef TPCC_WITH_CHOLMOD
        // supernodal LLT is far faster on the higher Laplacians; it may reject a
        // numerically singular shift or run out of memory, in which case LDLT takes over
        llt_.compute(shifted_);
        if (llt_.info() == Eigen::Success && llt_.cholmod().status == CHOLMOD_OK) {
            use_llt_ = true;
            return;
        }
#endif
        ldlt_.compute(shifted_);
        if (ldlt_.info() != Eigen::Success) {
            throw SolverError("factorization of the shifted Laplacian failed", 0);
        }
    }

    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) {
        if (use_cg_) {
            Eigen::MatrixXd out(rhs.rows(), rhs.cols());
            bool ok = true;
            for (Eigen::Index j = 0; j < rhs.cols() && ok; ++j) {
                out.col(j) = cg_.solve(rhs.col(j));
                ok = cg_.info() == Eigen::Success;
            }
            if (ok) {
                return out;
            }
            factorize();
        }
#ifdef TPCC_WITH_CHOLMOD
        if (use_llt_) {
            return llt_.solve(rhs);
        }
#endif
        return ldlt_.solve(rhs);
    }

    const SparseMatrix& matrix_;
    SparseMatrix shifted_;
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg_;
    bool use_cg_ = false;
#ifdef TPCC_WITH_CHOLMOD
    Eigen::CholmodSupernodalLLT<SparseMatrix> llt_;
    bool use_llt_ = false;
#endif
    Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
    Eigen::MatrixXd basis_;
    int iterations_ = 0;
};

std::string describe(const Eigen::VectorXd& values, Eigen::Index upto) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < std::min(upto, values.size()); ++i) {
        os << (i ? ", " : "") << values(i);
    }
    os << "]";
    return os.str();
}

void check_gap(const Eigen::VectorXd& values, int expected, double threshold, double gap,
               Eigen::Index size) {
    const auto e = static_cast<Eigen::Index>(expected);
    bool ok = true;
    if (e > 0 && values(e - 1) >= threshold) {
        ok = false;
    }
    if (e < size && values.size() > e && values(e) < gap) {
        ok = false;
    }
    if (!ok) {
        throw AmbiguousKernelError("no spectral gap after " + std::to_string(expected) +
                                   " zero eigenvalues (threshold " + std::to_string(threshold) +
                                   "); smallest eigenvalues " + describe(values, e + 1));
    }
}

void finish(KernelBasis& kb, const SparseMatrix& lap) {
    kb.max_residual = 0.0;
    for (Eigen::Index j = 0; j < kb.vectors.cols(); ++j) {
        kb.max_residual = std::max(kb.max_residual, (lap * kb.vectors.col(j)).norm());
    }
}

KernelBasis dense_kernel(const HodgeLaplacian& lap, const KernelOptions& options, KernelBasis kb) {
    const Eigen::MatrixXd dense(lap.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
    if (eig.info() != Eigen::Success) {
        throw SolverError("dense eigensolver failed", 0);
    }
    const Eigen::VectorXd& values = eig.eigenvalues();
    Eigen::Index count = 0;
    while (count < values.size() && values(count) < kb.threshold) {
        ++count;
    }
    if (options.expected_dim) {
        check_gap(values, *options.expected_dim, kb.threshold, 10.0 * kb.threshold,
                  values.size());
        count = *options.expected_dim;
    }
    kb.vectors = eig.eigenvectors().leftCols(count);
    kb.eigenvalues = values.head(count);
    kb.next_eigenvalue =
        count < values.size() ? values(count) : std::numeric_limits<double>::quiet_NaN();
    finish(kb, lap.matrix);
    return kb;
}

KernelBasis iterative_kernel(const HodgeLaplacian& lap, const KernelOptions& options,
                             KernelBasis kb) {
    const Eigen::Index n = lap.matrix.rows();
    const double kernel_tol = 1e-2 * kb.threshold;
    ShiftInvertSolver solver(lap.matrix, 1e-2 * kb.threshold, options.iterative_limit);
    // pairs below `guard` are kernel candidates; the guard pair far above the
    // threshold only needs a rough value, since slow Ritz convergence there costs
    // many shifted solves
    auto converged = [&](const ShiftInvertSolver::Ritz& r, Eigen::Index upto, Eigen::Index guard) {
        for (Eigen::Index i = 0; i < upto; ++i) {
            const double res = r.residuals(i);
            const double value = r.values(i);
            if (res <= kernel_tol + 1e-6 * std::abs(value)) {
                continue;
            }
            if (i == guard && res <= 0.1 * value && value - res >= 10.0 * kb.threshold) {
                continue;
            }
            return false;
        }
        return true;
    };

    Eigen::Index block = options.expected_dim
                             ? std::min<Eigen::Index>(n, *options.expected_dim + 5)
                             : std::min<Eigen::Index>(n, 8);
    int total_iterations = 0;
    for (;;) {
        solver.start(block, options.seed + static_cast<std::uint64_t>(block));
        bool grow = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            const auto ritz = solver.step();
            ++total_iterations;
            Eigen::Index count = 0;
            while (count < block && ritz.values(count) < kb.threshold) {
                ++count;
            }
            if (count >= block - 1 && block < n) {
                grow = true;
                break;
            }
            // the kernel plus one guard pair must be accurate
            const Eigen::Index need = options.expected_dim
                                          ? std::min<Eigen::Index>(block, *options.expected_dim + 1)
                                          : std::min<Eigen::Index>(block, count + 1);
            const Eigen::Index guard = options.expected_dim ? *options.expected_dim : count;
            if (!converged(ritz, need, guard)) {
                continue;
            }
            if (options.expected_dim) {
                if (*options.expected_dim > block) {
                    grow = true;
                    break;
                }
                check_gap(ritz.values, *options.expected_dim, kb.threshold, 10.0 * kb.threshold,
                          n);
                count = *options.expected_dim;
            }
            kb.vectors = ritz.vectors.leftCols(count);
            kb.eigenvalues = ritz.values.head(count);
            kb.next_eigenvalue = count < block ? ritz.values(count)
                                               : std::numeric_limits<double>::quiet_NaN();
            finish(kb, lap.matrix);
            return kb;
        }
        if (!grow) {
            throw SolverError("shift-invert iteration did not converge after " +
                                  std::to_string(total_iterations) + " iterations",
                              total_iterations);
        }
        block = std::min<Eigen::Index>(n, 2 * block);
    }
}

}  // namespace

KernelBasis kernel_basis(const HodgeLaplacian& laplacian, const KernelOptions& options) {
    const SparseMatrix& lap = laplacian.matrix;
    if (lap.rows() != lap.cols()) {
        throw ArgumentError("Laplacian must be square");
    }
    if (options.expected_dim && (*options.expected_dim < 0 || *options.expected_dim > lap.rows())) {
        throw ArgumentError("expected kernel dimension out of range");
    }
    KernelBasis kb;
    kb.dim = laplacian.dim;
    const Eigen::Index n = lap.rows();
    kb.scale = max_diagonal(lap);
    kb.threshold = options.tol * kb.scale;
    kb.next_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    if (n == 0) {
        kb.vectors.resize(0, 0);
        return kb;
    }
    if (kb.scale <= 0.0) {
        // the zero matrix: every vector is harmonic
        if (options.expected_dim && *options.expected_dim != n) {
            throw AmbiguousKernelError("zero Laplacian has kernel dimension " + std::to_string(n) +
                                       ", expected " + std::to_string(*options.expected_dim));
        }
        kb.vectors = Eigen::MatrixXd::Identity(n, n);
        kb.eigenvalues = Eigen::VectorXd::Zero(n);
        return kb;
    }
    if (n <= options.dense_limit) {
        return dense_kernel(laplacian, options, std::move(kb));
    }
    return iterative_kernel(laplacian, options, std::move(kb));
}

int betti(const SimplicialComplex& sc, int n, double tol) {
    KernelOptions options;
    options.tol = tol;
    return kernel_basis(hodge_laplacian(sc, n), options).betti();
}

Eigenpairs smallest_eigenpairs(const SparseMatrix& matrix, Eigen::Index count, std::uint64_t seed,
                               Eigen::Index dense_limit) {
    const Eigen::Index n = matrix.rows();
    if (count < 0 || count > n) {
        throw ArgumentError("requested eigenpair count out of range");
    }
    Eigenpairs out;
    if (n <= dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(matrix)};
        if (eig.info() != Eigen::Success) {
            throw SolverError("dense eigensolver failed", 0);
        }
        out.values = eig.eigenvalues().head(count);
        out.vectors = eig.eigenvectors().leftCols(count);
        return out;
    }
    const double scale = std::max(max_diagonal(matrix), 1.0);
    ShiftInvertSolver solver(matrix, 1e-6 * scale);
    const Eigen::Index block = std::min(n, count + std::max<Eigen::Index>(count, 8));
    solver.start(block, seed);
    const int max_iterations = 1000;
    for (int it = 0; it < max_iterations; ++it) {
        const auto ritz = solver.step();
        bool done = true;
        for (Eigen::Index i = 0; i < count; ++i) {
            if (ritz.residuals(i) > 1e-8 * scale) {
                done = false;
                break;
            }
        }
        if (done) {
            out.values = ritz.values.head(count);
            out.vectors = ritz.vectors.leftCols(count);
            return out;
        }
    }
    throw SolverError("smallest eigenpairs did not converge after " +
                          std::to_string(max_iterations) + " iterations",
                      max_iterations);
}

}  // namespace tpcc
