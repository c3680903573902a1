#include "tstokes/linalg.hpp"

#include <Eigen/LU>
#include <limits>
#include <stdexcept>
#include <vector>

#ifdef TSTOKES_WITH_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

namespace tstokes {

struct Factorization::Impl {
    // UMFPACK keeps pointers into the matrix arrays for its solve phase, so
    // the column-major copy has to live as long as the factors do.
    Eigen::SparseMatrix<double> matrix;
#ifdef TSTOKES_WITH_UMFPACK
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> solver;
#else
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
#endif
};

Factorization::Factorization(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix)
    : impl_(std::make_unique<Impl>()) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("factorization requires a square matrix");
    impl_->matrix = matrix;  // row-major to column-major conversion
    impl_->matrix.makeCompressed();
    impl_->solver.compute(impl_->matrix);
    if (impl_->solver.info() != Eigen::Success)
        throw std::runtime_error("sparse LU factorization failed (singular system?)");
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != impl_->matrix.rows())
        throw std::invalid_argument("right-hand side size does not match the matrix");
    Eigen::VectorXd x = impl_->solver.solve(rhs);
    if (impl_->solver.info() != Eigen::Success)
        throw std::runtime_error("sparse LU solve failed");
    return x;
}

const char* Factorization::backend() {
#ifdef TSTOKES_WITH_UMFPACK
    return "umfpack";
#else
    return "sparselu";
#endif
}

double relative_residual(const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    double nb = b.norm();
    double nr = (matrix * x - b).norm();
    if (nb == 0.0) return nr == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return nr / nb;
}

PinnedSystem pin_mean_row(const SparseSystem& sys) {
    if (sys.partition.n_mean != 1 || sys.partition.size() != sys.size())
        throw std::invalid_argument("pin_mean_row expects a system with one mean row");
    PinnedSystem out;
    const int n = sys.size();
    out.mean_eq = n - 1;
    out.pinned_eq = n - 2;  // the last pressure dof
    out.mean_weights = Eigen::VectorXd::Zero(sys.partition.n_pressure);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(sys.matrix.nonZeros()));
    const int p0 = sys.partition.n_velocity;
    for (int row = 0; row < sys.matrix.outerSize(); ++row)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.matrix, row);
             it; ++it) {
            if (it.row() == out.mean_eq) {
                out.mean_weights[static_cast<int>(it.col()) - p0] = it.value();
                continue;
            }
            if (it.col() == out.mean_eq || it.row() == out.pinned_eq ||
                it.col() == out.pinned_eq)
                continue;
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                              it.value());
        }
    trip.emplace_back(out.pinned_eq, out.pinned_eq, 1.0);
    trip.emplace_back(out.mean_eq, out.mean_eq, 1.0);
    out.matrix.resize(n, n);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.matrix.makeCompressed();
    return out;
}

Eigen::VectorXd pinned_rhs(const PinnedSystem& pinned, const Eigen::VectorXd& rhs) {
    Eigen::VectorXd b = rhs;
    b[pinned.pinned_eq] = 0.0;
    b[pinned.mean_eq] = 0.0;
    return b;
}

void restore_zero_mean(const PinnedSystem& pinned, const DofPartition& partition,
                       Eigen::VectorXd& x) {
    const int p0 = partition.n_velocity;
    const int np = partition.n_pressure;
    const double wsum = pinned.mean_weights.sum();
    if (wsum <= 0.0) throw std::runtime_error("degenerate mean-row weights");
    const double shift = pinned.mean_weights.dot(x.segment(p0, np)) / wsum;
    x.segment(p0, np).array() -= shift;
    x[pinned.mean_eq] = 0.0;
}

SaddleSolver::SaddleSolver(const SparseSystem& sys)
    : matrix_(sys.matrix), partition_(sys.partition) {
    const int N = sys.size();
    const int nfree = partition_.n_velocity;
    const int nb = partition_.n_bubble;
    if (nb % 2 != 0 || nb > nfree)
        throw std::invalid_argument("invalid bubble block in dof partition");
    nfv_ = nfree - nb;
    const int nred = N - nb;
    reduced_ = DofPartition{nfv_, partition_.n_pressure, partition_.n_mean, 0};

    // full index -> reduced index (bubbles removed, the rest keeps its order)
    const auto red = [this, nb](int i) { return i < nfv_ ? i : i - nb; };
    const auto is_bubble = [this, nfree](int i) { return i >= nfv_ && i < nfree; };

    // scoped so every intermediate is freed before the factorization, which
    // dominates the peak memory at fine resolutions
    {
        bubble_inv_.assign(nb / 2, Eigen::Matrix2d::Zero());
        std::vector<Eigen::Triplet<double>> t_top, t_tb, t_bt;
        for (int row = 0; row < matrix_.outerSize(); ++row)
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(matrix_,
                                                                                row);
                 it; ++it) {
                const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
                const bool rb = is_bubble(r), cb = is_bubble(c);
                if (rb && cb) {
                    const int pr = r - nfv_, pc = c - nfv_;
                    if (pr / 2 != pc / 2)
                        throw std::runtime_error("bubble dofs couple across triangles");
                    bubble_inv_[pr / 2](pr % 2, pc % 2) += it.value();
                } else if (rb) {
                    t_bt.emplace_back(r - nfv_, red(c), it.value());
                } else if (cb) {
                    t_tb.emplace_back(red(r), c - nfv_, it.value());
                } else {
                    t_top.emplace_back(red(r), red(c), it.value());
                }
            }
        std::vector<Eigen::Triplet<double>> t_diag;
        t_diag.reserve(2 * nb);
        for (int t = 0; t < nb / 2; ++t) {
            const Eigen::Matrix2d inv = bubble_inv_[t].inverse();
            if (!inv.allFinite()) throw std::runtime_error("singular bubble block");
            bubble_inv_[t] = inv;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t_diag.emplace_back(2 * t + a, 2 * t + b, inv(a, b));
        }

        SparseSystem red_sys;
        red_sys.partition = reduced_;
        {
            Eigen::SparseMatrix<double> top(nred, nred);
            top.setFromTriplets(t_top.begin(), t_top.end());
            std::vector<Eigen::Triplet<double>>().swap(t_top);
            if (nb > 0) {
                Eigen::SparseMatrix<double> tb(nred, nb), bt(nb, nred), diag(nb, nb);
                tb.setFromTriplets(t_tb.begin(), t_tb.end());
                bt.setFromTriplets(t_bt.begin(), t_bt.end());
                diag.setFromTriplets(t_diag.begin(), t_diag.end());
                std::vector<Eigen::Triplet<double>>().swap(t_tb);
                std::vector<Eigen::Triplet<double>>().swap(t_bt);
                std::vector<Eigen::Triplet<double>>().swap(t_diag);
                red_sys.matrix = top - tb * (diag * bt).eval();
            } else {
                red_sys.matrix = top;
            }
        }
        pinned_ = pin_mean_row(red_sys);
    }
    factorization_ = std::make_unique<Factorization>(pinned_.matrix);
    // the factorization keeps its own copy; drop ours
    pinned_.matrix.resize(0, 0);
    pinned_.matrix.data().squeeze();
}

// Reduced right-hand side: b_top - A_tb * D * b_bubble, computed with one
// sparse matrix-vector product against the full matrix.
Eigen::VectorXd SaddleSolver::condense_rhs(const Eigen::VectorXd& rhs) const {
    const int N = static_cast<int>(matrix_.rows());
    const int nb = partition_.n_bubble;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(N);
    for (int t = 0; t < nb / 2; ++t)
        z.segment<2>(nfv_ + 2 * t) = bubble_inv_[t] * rhs.segment<2>(nfv_ + 2 * t);
    const Eigen::VectorXd shifted = rhs - matrix_ * z;
    Eigen::VectorXd out(N - nb);
    out.head(nfv_) = shifted.head(nfv_);
    out.tail(N - nb - nfv_) = shifted.tail(N - nb - nfv_);
    return out;
}

// One pass of the condensed pinned factorization. The mean multiplier is
// known a priori: summing the continuity rows annihilates the divergence
// columns (each free velocity basis function has zero net boundary flux,
// a property static condensation preserves), leaving mu * sum(m) =
// sum(continuity rhs). Moving mu to the right-hand side keeps the system
// compatible with the dropped row, which plain pinning is not when the
// Dirichlet data carries a net flux (Test-2 inflow corners).
Eigen::VectorXd SaddleSolver::raw_solve(const Eigen::VectorXd& rhs) const {
    const int N = static_cast<int>(matrix_.rows());
    const int nb = partition_.n_bubble;
    const int np = partition_.n_pressure;

    Eigen::VectorXd br = condense_rhs(rhs);
    const double mu = br.segment(nfv_, np).sum() / pinned_.mean_weights.sum();
    br.segment(nfv_, np) -= mu * pinned_.mean_weights;

    Eigen::VectorXd xr = factorization_->solve(pinned_rhs(pinned_, br));
    restore_zero_mean(pinned_, reduced_, xr);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
    x.head(nfv_) = xr.head(nfv_);
    x.tail(N - nb - nfv_) = xr.tail(N - nb - nfv_);
    x[N - 1] = mu;

    // bubble recovery: u_b = D * (b_b - A_bt x_t); bubbles are zero in x, so
    // the matrix product yields exactly A_bt x_t on the bubble rows
    const Eigen::VectorXd ax = matrix_ * x;
    for (int t = 0; t < nb / 2; ++t)
        x.segment<2>(nfv_ + 2 * t) = bubble_inv_[t] * (rhs.segment<2>(nfv_ + 2 * t) -
                                                       ax.segment<2>(nfv_ + 2 * t));
    return x;
}

Eigen::VectorXd SaddleSolver::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = raw_solve(rhs);
    const double nb = rhs.norm();
    double res = relative_residual(matrix_, x, rhs);
    for (int sweep = 0; sweep < 5 && res > 1e-14; ++sweep) {
        const Eigen::VectorXd defect = rhs - matrix_ * x;
        Eigen::VectorXd xc = x + raw_solve(defect);
        const double rc = relative_residual(matrix_, xc, rhs);
        if (nb > 0.0 && rc >= res) break;
        x = std::move(xc);
        res = rc;
    }
    last_residual_ = res;
    return x;
}

}  // namespace tstokes
