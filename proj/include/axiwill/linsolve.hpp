#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <utility>
#include <vector>

namespace axiwill::linsolve {

// Square sparse matrix assembled from coordinate entries. Duplicates are
// summed when the matrix is finalized.
class SparseMatrix {
public:
    explicit SparseMatrix(int dimension);

    int dimension() const { return n_; }
    bool finalized() const { return finalized_; }

    void add(int row, int col, double value);
    void finalize();

    const Eigen::SparseMatrix<double>& matrix() const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    double entry(int row, int col) const;

private:
    int n_;
    bool finalized_ = false;
    std::vector<Eigen::Triplet<double>> triplets_;
    Eigen::SparseMatrix<double> csc_;
};

struct SolveReport {
    bool success = false;
    double rcond = 0.0;     // reciprocal 1-norm condition estimate of the equilibrated matrix
    double residual = 0.0;  // ||A x - b||_inf / ||b||_inf (absolute when b = 0)
};

// Pivoted sparse LU of a row/column equilibrated copy of the matrix.
// Immutable after construction; concurrent solves are permitted.
class Factorization {
public:
    int dimension() const { return n_; }
    double rcond() const { return rcond_; }

    std::pair<Eigen::VectorXd, SolveReport> solve(const Eigen::VectorXd& rhs) const;

private:
    friend Factorization factor(const SparseMatrix& matrix, double rcond_threshold);
    Factorization() = default;

    Eigen::VectorXd solve_scaled(const Eigen::VectorXd& scaled_rhs) const;
    Eigen::VectorXd solve_scaled_transpose(const Eigen::VectorXd& rhs) const;

    int n_ = 0;
    double rcond_ = 0.0;
    Eigen::SparseMatrix<double> original_;
    Eigen::VectorXd row_scale_;
    Eigen::VectorXd col_scale_;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
};

inline constexpr double kDefaultRcondThreshold = 1e-14;

// Throws Error(SingularSystem) when the factorization breaks down or the
// reciprocal condition estimate falls below the threshold.
Factorization factor(const SparseMatrix& matrix, double rcond_threshold = kDefaultRcondThreshold);

}  // namespace axiwill::linsolve
