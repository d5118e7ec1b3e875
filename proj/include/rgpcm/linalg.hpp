#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgpcm {

// Dense row-major matrix of doubles. Everything in this library is small
// (p rarely exceeds a few dozen), so no attempt is made at blocking or
// expression templates.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<double> row(int i) {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const;

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);

// Max-abs difference between two equally sized matrices.
double max_abs_diff(const Matrix& a, const Matrix& b);

// Symmetric p x p matrix. Construction enforces entries[i][j] == entries[j][i]
// exactly: mutation goes through set(), which writes both triangles.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : m_(dim, dim) {
        if (dim < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
    }

    // Symmetrizes exactly via 0.5*(m + m'); rejects matrices that are not
    // symmetric to within `tol` in max-abs.
    static SymMatrix from_matrix(const Matrix& m, double tol = 1e-9);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(std::span<const double> d);

    int dim() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    void set(int i, int j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }
    void add(int i, int j, double v) {
        m_(i, j) += v;
        if (i != j) m_(j, i) += v;
    }

    const Matrix& matrix() const { return m_; }

    double trace() const;
    std::vector<double> diagonal_vector() const;

private:
    Matrix m_;
};

// Matrix with orthonormal columns; construction verifies Q'Q = I to 1e-10
// in max-abs.
class OrthMatrix {
public:
    OrthMatrix() = default;

    static OrthMatrix from_matrix(Matrix q, double tol = 1e-10);
    static OrthMatrix identity(int n);

    int dim() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    std::vector<double> column(int k) const;

    // Deviation of Q'Q from the identity, max-abs entry.
    static double orthonormality_defect(const Matrix& q);

private:
    explicit OrthMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Eigenvalues sorted descending, column k of `vectors` paired with values[k].
struct EigenPairs {
    std::vector<double> values;
    OrthMatrix vectors;

    SymMatrix reconstruct() const;
};

class EigSolverError : public std::runtime_error {
public:
    EigSolverError(const std::string& what, double off_diagonal_residual)
        : std::runtime_error(what), residual(off_diagonal_residual) {}
    double residual;
};

class CholeskyError : public std::runtime_error {
public:
    CholeskyError(const std::string& what, int leading_minor)
        : std::runtime_error(what), minor_index(leading_minor) {}
    int minor_index;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Converged when the
// largest off-diagonal magnitude drops below 1e-12 times the largest diagonal
// magnitude; throws EigSolverError after 100 sweeps. Eigenpairs are sorted by
// descending value and each eigenvector's largest-magnitude component is made
// positive so output is deterministic.
EigenPairs eig_sym(const SymMatrix& m);

// Lower-triangular L with L*L' == m. Throws CholeskyError naming the failing
// leading minor when m is not positive definite.
Matrix cholesky(const SymMatrix& m);

// diag(Q' S Q).
std::vector<double> quad_diag(const OrthMatrix& q, const SymMatrix& s);

// Solve L y = b for lower-triangular L (forward substitution).
std::vector<double> solve_lower(const Matrix& l, std::span<const double> b);

}  // namespace rgpcm
