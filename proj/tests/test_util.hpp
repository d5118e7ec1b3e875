#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here stays implementation-free: oracles use brute force, pair counting or
// textbook formulas so they cannot share a bug with the library code.

#include <cmath>
#include <random>
#include <vector>

#include "rgpcm/em.hpp"
#include "rgpcm/linalg.hpp"
#include "rgpcm/selection.hpp"

namespace testutil {

inline rgpcm::Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    rgpcm::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

// Random symmetric matrix via (A + A')/2.
inline rgpcm::SymMatrix random_symmetric(int p, std::mt19937_64& rng, double scale = 1.0) {
    const rgpcm::Matrix a = random_matrix(p, p, rng, scale);
    rgpcm::SymMatrix s(p);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    return s;
}

// Random SPD matrix A'A + eps*I.
inline rgpcm::SymMatrix random_spd(int p, std::mt19937_64& rng, double eps = 0.1) {
    const rgpcm::Matrix a = random_matrix(p, p, rng);
    rgpcm::SymMatrix s(p);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            double v = 0.0;
            for (int k = 0; k < p; ++k) v += a(k, i) * a(k, j);
            s.set(i, j, v + (i == j ? eps : 0.0));
        }
    return s;
}

inline double max_abs_diff_sym(const rgpcm::SymMatrix& a, const rgpcm::SymMatrix& b) {
    return rgpcm::max_abs_diff(a.matrix(), b.matrix());
}

inline double frobenius_diff(const rgpcm::SymMatrix& a, const rgpcm::SymMatrix& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    return std::sqrt(s);
}

// Determinant by cofactor/LU-free recursion; fine for the tiny p used here.
inline double det_oracle(const rgpcm::SymMatrix& s) {
    const int p = s.dim();
    std::vector<std::vector<double>> a(p, std::vector<double>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) a[i][j] = s(i, j);
    double det = 1.0;
    for (int c = 0; c < p; ++c) {
        int piv = c;
        for (int r = c + 1; r < p; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < p; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < p; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

// Pair-counting adjusted Rand index: classifies all n-choose-2 point pairs
// as agreeing/disagreeing in each partition and applies the chance-corrected
// formula directly.
inline double ari_pair_oracle(const std::vector<int>& u, const std::vector<int>& v) {
    const int n = static_cast<int>(u.size());
    double a = 0, b = 0, c = 0, d = 0;  // together/together, together/apart, ...
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool su = u[i] == u[j];
            const bool sv = v[i] == v[j];
            if (su && sv) ++a;
            else if (su && !sv) ++b;
            else if (!su && sv) ++c;
            else ++d;
        }
    const double total = a + b + c + d;
    if (total == 0.0) return 1.0;
    const double expected = (a + b) * (a + c) / total;
    const double maximum = 0.5 * ((a + b) + (a + c));
    const double den = maximum - expected;
    if (den == 0.0) return 1.0;
    return (a - expected) / den;
}

// All set partitions of {0..n-1} as restricted growth strings
// (a_0 = 0, a_i <= 1 + max of the prefix).
inline std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> rgs(n, 0);
    while (true) {
        out.push_back(rgs);
        int i = n - 1;
        for (; i > 0; --i) {
            int maxv = 0;
            for (int j = 0; j < i; ++j) maxv = std::max(maxv, rgs[j]);
            if (rgs[i] <= maxv) {  // room to increment
                ++rgs[i];
                for (int j = i + 1; j < n; ++j) rgs[j] = 0;
                break;
            }
        }
        if (i == 0) break;
    }
    return out;
}

// Brute-force oracle for the shared-orientation update in two dimensions:
// scans the single rotation angle over [0, pi) at `resolution` radians and
// returns the smallest objective found. Column pairings are covered because
// theta and theta + pi/2 swap the columns.
inline double flury_grid_oracle(const std::vector<rgpcm::SymMatrix>& scatters,
                                std::span<const double> counts,
                                const std::vector<std::vector<double>>& eigvals,
                                double resolution = 1e-4) {
    constexpr double kPi = 3.14159265358979323846;
    double best = std::numeric_limits<double>::infinity();
    for (double theta = 0.0; theta < kPi; theta += resolution) {
        const double c = std::cos(theta), s = std::sin(theta);
        double obj = 0.0;
        for (std::size_t g = 0; g < scatters.size(); ++g) {
            const rgpcm::SymMatrix& m = scatters[g];
            const double q1 = c * (m(0, 0) * c + m(0, 1) * s) + s * (m(0, 1) * c + m(1, 1) * s);
            const double q2 =
                (-s) * (m(0, 0) * (-s) + m(0, 1) * c) + c * (m(0, 1) * (-s) + m(1, 1) * c);
            obj += counts[g] * (q1 / eigvals[g][0] + q2 / eigvals[g][1]);
        }
        best = std::min(best, obj);
    }
    return best;
}

// Mixture data generator used across the EM tests: G well-separated Gaussian
// blobs with mildly correlated covariances.
inline rgpcm::Matrix blob_data(int n, int p, int G, std::mt19937_64& rng, double separation = 8.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    rgpcm::Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
        const int g = i % G;
        for (int j = 0; j < p; ++j)
            x(i, j) = separation * g * (j == 0 ? 1.0 : 0.25) + unif(rng) * normal(rng);
    }
    return x;
}

inline std::vector<int> cyclic_labels(int n, int G) {
    std::vector<int> lab(n);
    for (int i = 0; i < n; ++i) lab[i] = i % G;
    return lab;
}

}  // namespace testutil
