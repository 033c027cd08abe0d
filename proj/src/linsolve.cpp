#include "axiwill/linsolve.hpp"

#include "axiwill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axiwill::linsolve {

SparseMatrix::SparseMatrix(int dimension) : n_(dimension) {
    if (dimension < 0) fail(ErrorKind::DimensionMismatch, "negative matrix dimension");
}

void SparseMatrix::add(int row, int col, double value) {
    if (finalized_) fail(ErrorKind::DimensionMismatch, "add() on a finalized matrix");
    if (row < 0 || row >= n_ || col < 0 || col >= n_) {
        std::ostringstream os;
        os << "entry (" << row << "," << col << ") outside " << n_ << "x" << n_ << " matrix";
        fail(ErrorKind::DimensionMismatch, os.str());
    }
    if (!std::isfinite(value)) fail(ErrorKind::NonFiniteSolution, "non-finite matrix entry");
    triplets_.emplace_back(row, col, value);
}

void SparseMatrix::finalize() {
    if (finalized_) return;
    csc_.resize(n_, n_);
    csc_.setFromTriplets(triplets_.begin(), triplets_.end());
    csc_.makeCompressed();
    triplets_.clear();
    triplets_.shrink_to_fit();
    finalized_ = true;
}

const Eigen::SparseMatrix<double>& SparseMatrix::matrix() const {
    if (!finalized_) fail(ErrorKind::DimensionMismatch, "matrix used before finalize()");
    return csc_;
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
    if (x.size() != n_) fail(ErrorKind::DimensionMismatch, "vector length does not match matrix");
    return matrix() * x;
}

double SparseMatrix::entry(int row, int col) const { return matrix().coeff(row, col); }

namespace {

double one_norm(const Eigen::SparseMatrix<double>& a) {
    double best = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        double s = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

Eigen::VectorXd Factorization::solve_scaled(const Eigen::VectorXd& b) const { return lu_->solve(b); }

Eigen::VectorXd Factorization::solve_scaled_transpose(const Eigen::VectorXd& b) const {
    return lu_->transpose().solve(b);
}

std::pair<Eigen::VectorXd, SolveReport> Factorization::solve(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != n_) fail(ErrorKind::DimensionMismatch, "right-hand side length does not match matrix");
    Eigen::VectorXd y = solve_scaled(row_scale_.cwiseProduct(rhs));
    Eigen::VectorXd x = col_scale_.cwiseProduct(y);
    SolveReport report;
    report.rcond = rcond_;
    report.success = x.allFinite();
    if (!report.success) fail(ErrorKind::NonFiniteSolution, "linear solve produced non-finite values");
    const double bnorm = rhs.lpNorm<Eigen::Infinity>();
    const double rnorm = n_ == 0 ? 0.0 : (original_ * x - rhs).lpNorm<Eigen::Infinity>();
    report.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    return {std::move(x), report};
}

Factorization factor(const SparseMatrix& matrix, double rcond_threshold) {
    const auto& a = matrix.matrix();
    Factorization f;
    f.n_ = matrix.dimension();
    f.original_ = a;
    const int n = f.n_;

    // Equilibrate rows then columns by their largest magnitude entries.
    f.row_scale_ = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            f.row_scale_[it.row()] = std::max(f.row_scale_[it.row()], std::abs(it.value()));
    for (int i = 0; i < n; ++i) {
        if (f.row_scale_[i] == 0.0) {
            std::ostringstream os;
            os << "row " << i << " is identically zero";
            fail(ErrorKind::SingularSystem, os.str());
        }
        f.row_scale_[i] = 1.0 / f.row_scale_[i];
    }
    Eigen::SparseMatrix<double> scaled = f.row_scale_.asDiagonal() * a;
    f.col_scale_ = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < scaled.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(scaled, k); it; ++it)
            f.col_scale_[it.col()] = std::max(f.col_scale_[it.col()], std::abs(it.value()));
    for (int j = 0; j < n; ++j) {
        if (f.col_scale_[j] == 0.0) {
            std::ostringstream os;
            os << "column " << j << " is identically zero";
            fail(ErrorKind::SingularSystem, os.str());
        }
        f.col_scale_[j] = 1.0 / f.col_scale_[j];
    }
    scaled = scaled * f.col_scale_.asDiagonal();
    scaled.makeCompressed();

    f.lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    f.lu_->compute(scaled);
    if (f.lu_->info() != Eigen::Success) {
        fail(ErrorKind::SingularSystem, "sparse LU factorization failed: " + f.lu_->lastErrorMessage());
    }
    if (n == 0) {
        f.rcond_ = 1.0;
        return f;
    }

    // Hager/Higham estimate of ||B^{-1}||_1 for the equilibrated matrix B.
    double inv_norm = 0.0;
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
    int last_index = -1;
    for (int iter = 0; iter < 5; ++iter) {
        Eigen::VectorXd y = f.solve_scaled(x);
        if (!y.allFinite()) fail(ErrorKind::SingularSystem, "non-finite values while estimating the condition number");
        const double est = y.lpNorm<1>();
        if (iter > 0 && est <= inv_norm) {
            inv_norm = std::max(inv_norm, est);
            break;
        }
        inv_norm = est;
        Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        Eigen::VectorXd z = f.solve_scaled_transpose(xi);
        int j = 0;
        z.cwiseAbs().maxCoeff(&j);
        if (std::abs(z[j]) <= z.dot(x) || j == last_index) break;
        last_index = j;
        x.setZero();
        x[j] = 1.0;
    }
    Eigen::VectorXd alt(n);
    for (int i = 0; i < n; ++i) alt[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + (n > 1 ? double(i) / (n - 1) : 0.0));
    Eigen::VectorXd alt_sol = f.solve_scaled(alt);
    if (!alt_sol.allFinite()) fail(ErrorKind::SingularSystem, "non-finite values while estimating the condition number");
    inv_norm = std::max(inv_norm, 2.0 * alt_sol.lpNorm<1>() / (3.0 * n));

    const double anorm = one_norm(scaled);
    f.rcond_ = (inv_norm > 0.0 && std::isfinite(inv_norm)) ? 1.0 / (anorm * inv_norm) : 0.0;
    if (!(f.rcond_ >= rcond_threshold)) {
        std::ostringstream os;
        os << "reciprocal condition estimate " << f.rcond_ << " below threshold " << rcond_threshold;
        fail(ErrorKind::SingularSystem, os.str());
    }
    return f;
}

}  // namespace axiwill::linsolve
