#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>

namespace tstokes {

/// Sizes of the blocks of the reduced saddle system, in unknown order:
/// free velocity dofs, pressure dofs, one mean-pressure multiplier. The
/// trailing n_bubble velocity equations are the per-triangle bubble pairs,
/// ordered by triangle; they never carry Dirichlet constraints.
struct DofPartition {
    int n_velocity = 0;
    int n_pressure = 0;
    int n_mean = 0;
    int n_bubble = 0;

    int size() const { return n_velocity + n_pressure + n_mean; }
};

/// Assembled linear system. The matrix keeps the saddle structure
/// [[A + r M_Gamma, B^T, 0], [B, 0, m^T], [0, m, 0]] after Dirichlet
/// elimination; only the right-hand side changes between friction iterations.
struct SparseSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    Eigen::VectorXd rhs;
    DofPartition partition;

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// Sparse LU factorization, computed once and reused for many right-hand
/// sides. Throws std::runtime_error if the matrix is singular or the
/// factorization breaks down.
class Factorization {
  public:
    explicit Factorization(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix);
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;
    Factorization(const Factorization&) = delete;
    Factorization& operator=(const Factorization&) = delete;

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

    /// Name of the backend that produced the factors ("umfpack" or "sparselu").
    static const char* backend();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// ||A x - b|| / ||b||, with the convention 0/0 = 0.
double relative_residual(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// Solver-side reformulation of the saddle system: the dense zero-mean row
/// ruins the fill-reducing ordering of sparse LU (50x slower factorizations),
/// so for solving we replace it and one pressure dof's equation by identities
/// that pin that dof to zero. The pinned system has the same dimensions and
/// the same solution up to the pressure constant, which restore_zero_mean()
/// shifts back so the original system is satisfied to roundoff.
struct PinnedSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
    int pinned_eq = -1;                // pressure equation replaced by p_j = 0
    int mean_eq = -1;                  // zero-mean row replaced by mu = 0
    Eigen::VectorXd mean_weights;      // coefficients of the original mean row
};

PinnedSystem pin_mean_row(const SparseSystem& sys);

/// Zero the entries of `rhs` that correspond to the replaced equations.
Eigen::VectorXd pinned_rhs(const PinnedSystem& pinned, const Eigen::VectorXd& rhs);

/// Shift the pressure block of a pinned-system solution to zero weighted mean.
void restore_zero_mean(const PinnedSystem& pinned, const DofPartition& partition,
                       Eigen::VectorXd& x);

/// Solver for the assembled saddle system. Before factorizing it
///  - eliminates the bubble velocity pairs by static condensation (they are
///    2x2 block diagonal, coupling only inside their own triangle), and
///  - replaces the dense zero-mean row by a pinned pressure dof, moving the
///    a-priori-known mean multiplier to the right-hand side.
/// Both transformations shrink or sparsify the LU dramatically; the lost
/// accuracy (point pinning is ill-conditioned on fine meshes) is recovered by
/// defect-correction sweeps against the original assembled matrix.
class SaddleSolver {
  public:
    explicit SaddleSolver(const SparseSystem& sys);

    /// Solution of the original system, refined until the relative residual
    /// stops improving (at most five sweeps). Pressure has zero weighted mean.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

    /// Relative residual of the last solve() against the original system.
    double last_residual() const { return last_residual_; }

  private:
    Eigen::VectorXd raw_solve(const Eigen::VectorXd& rhs) const;
    Eigen::VectorXd condense_rhs(const Eigen::VectorXd& rhs) const;

    Eigen::SparseMatrix<double, Eigen::RowMajor> matrix_;
    DofPartition partition_;        // of the original system
    DofPartition reduced_;          // after bubble elimination
    int nfv_ = 0;                   // free vertex velocity eqs, [0, nfv)
    std::vector<Eigen::Matrix2d> bubble_inv_;  // inverted 2x2 bubble blocks
    PinnedSystem pinned_;
    std::unique_ptr<Factorization> factorization_;
    mutable double last_residual_ = 0.0;
};

}  // namespace tstokes
