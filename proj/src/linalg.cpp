#include "rgpcm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgpcm {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix not square");
    if (m.rows() < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
    SymMatrix s(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = i; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > tol)
                throw std::invalid_argument("SymMatrix: input is not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    }
    return s;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix s(static_cast<int>(d.size()));
    for (int i = 0; i < s.dim(); ++i) s.set(i, i, d[i]);
    return s;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
}

std::vector<double> SymMatrix::diagonal_vector() const {
    std::vector<double> d(dim());
    for (int i = 0; i < dim(); ++i) d[i] = m_(i, i);
    return d;
}

double OrthMatrix::orthonormality_defect(const Matrix& q) {
    const int p = q.cols();
    double worst = 0.0;
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            double dot = 0.0;
            for (int i = 0; i < q.rows(); ++i) dot += q(i, a) * q(i, b);
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

OrthMatrix OrthMatrix::from_matrix(Matrix q, double tol) {
    if (q.rows() != q.cols() || q.rows() < 1)
        throw std::invalid_argument("OrthMatrix: matrix must be square, dim >= 1");
    const double defect = orthonormality_defect(q);
    if (defect > tol)
        throw std::invalid_argument("OrthMatrix: columns not orthonormal (defect " +
                                    std::to_string(defect) + ")");
    return OrthMatrix(std::move(q));
}

OrthMatrix OrthMatrix::identity(int n) { return OrthMatrix(Matrix::identity(n)); }

std::vector<double> OrthMatrix::column(int k) const {
    std::vector<double> c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = m_(i, k);
    return c;
}

SymMatrix EigenPairs::reconstruct() const {
    const int p = vectors.dim();
    SymMatrix s(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double v = 0.0;
            for (int k = 0; k < p; ++k) v += vectors(i, k) * values[k] * vectors(j, k);
            s.set(i, j, v);
        }
    }
    return s;
}

namespace {

// Fix each eigenvector's overall sign: largest-magnitude component positive.
void normalize_column_signs(Matrix& v) {
    for (int k = 0; k < v.cols(); ++k) {
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, k)) > best) {
                best = std::abs(v(i, k));
                arg = i;
            }
        }
        if (v(arg, k) < 0.0)
            for (int i = 0; i < v.rows(); ++i) v(i, k) = -v(i, k);
    }
}

}  // namespace

EigenPairs eig_sym(const SymMatrix& m) {
    const int p = m.dim();
    Matrix a = m.matrix();
    Matrix v = Matrix::identity(p);

    constexpr int kMaxSweeps = 100;
    constexpr double kRelTol = 1e-12;

    auto max_offdiag = [&]() {
        double w = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j) w = std::max(w, std::abs(a(i, j)));
        return w;
    };
    auto max_diag = [&]() {
        double w = 0.0;
        for (int i = 0; i < p; ++i) w = std::max(w, std::abs(a(i, i)));
        return w;
    };

    int sweep = 0;
    while (true) {
        const double off = max_offdiag();
        if (off <= kRelTol * max_diag() || off == 0.0) break;
        if (sweep >= kMaxSweeps)
            throw EigSolverError("eig_sym: Jacobi failed to converge after " +
                                     std::to_string(kMaxSweeps) + " sweeps",
                                 off);
        ++sweep;
        for (int i = 0; i < p - 1; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double apq = a(i, j);
                if (apq == 0.0) continue;
                const double tau = (a(j, j) - a(i, i)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < p; ++k) {
                    const double aki = a(k, i);
                    const double akj = a(k, j);
                    a(k, i) = c * aki - s * akj;
                    a(k, j) = s * aki + c * akj;
                }
                for (int k = 0; k < p; ++k) {
                    const double aik = a(i, k);
                    const double ajk = a(j, k);
                    a(i, k) = c * aik - s * ajk;
                    a(j, k) = s * aik + c * ajk;
                }
                a(i, j) = 0.0;
                a(j, i) = 0.0;
                for (int k = 0; k < p; ++k) {
                    const double vki = v(k, i);
                    const double vkj = v(k, j);
                    v(k, i) = c * vki - s * vkj;
                    v(k, j) = s * vki + c * vkj;
                }
            }
        }
    }

    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a(x, x) > a(y, y); });

    EigenPairs out;
    out.values.resize(p);
    Matrix sorted(p, p);
    for (int k = 0; k < p; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int i = 0; i < p; ++i) sorted(i, k) = v(i, order[k]);
    }
    normalize_column_signs(sorted);
    out.vectors = OrthMatrix::from_matrix(std::move(sorted));
    return out;
}

Matrix cholesky(const SymMatrix& m) {
    const int p = m.dim();
    Matrix l(p, p);
    for (int j = 0; j < p; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw CholeskyError("cholesky: leading minor " + std::to_string(j + 1) +
                                    " is not positive definite",
                                j + 1);
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < p; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

std::vector<double> quad_diag(const OrthMatrix& q, const SymMatrix& s) {
    if (q.dim() != s.dim()) throw std::invalid_argument("quad_diag: dimension mismatch");
    const int p = s.dim();
    std::vector<double> out(p, 0.0);
    std::vector<double> tmp(p);
    for (int k = 0; k < p; ++k) {
        for (int i = 0; i < p; ++i) {
            double v = 0.0;
            for (int j = 0; j < p; ++j) v += s(i, j) * q(j, k);
            tmp[i] = v;
        }
        double acc = 0.0;
        for (int i = 0; i < p; ++i) acc += q(i, k) * tmp[i];
        out[k] = acc;
    }
    return out;
}

std::vector<double> solve_lower(const Matrix& l, std::span<const double> b) {
    const int p = l.rows();
    if (static_cast<int>(b.size()) != p)
        throw std::invalid_argument("solve_lower: dimension mismatch");
    std::vector<double> y(p);
    for (int i = 0; i < p; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

}  // namespace rgpcm
