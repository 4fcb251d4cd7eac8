#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nettrack/errors.hpp"

namespace nettrack {

/// Dense real matrix, row-major. Small sizes only; every algorithm in this
/// library is O(n^3)-dense and meant for problems of a few hundred rows at most.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // rows*cols entries, row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
};

using Vec = std::vector<double>;

inline Matrix zeros(int r, int c) { return Matrix(r, c); }

inline Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

inline Matrix ones(int r, int c) {
    Matrix m(r, c);
    for (auto& x : m.a) x = 1.0;
    return m;
}

inline Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

inline Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw DimensionMismatch("operator+: shape mismatch");
    Matrix r = x;
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
    return r;
}

inline Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw DimensionMismatch("operator-: shape mismatch");
    Matrix r = x;
    for (size_t k = 0; k < r.a.size(); ++k) r.a[k] -= y.a[k];
    return r;
}

inline Matrix operator*(double s, const Matrix& m) {
    Matrix r = m;
    for (auto& x : r.a) x *= s;
    return r;
}

inline Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw DimensionMismatch("operator*: inner dimensions differ");
    Matrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xv = x(i, k);
            if (xv == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
        }
    return r;
}

inline Vec matvec(const Matrix& m, const Vec& v) {
    if (m.cols != static_cast<int>(v.size())) throw DimensionMismatch("matvec: shape mismatch");
    Vec r(m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const double xv = x(i, j);
            if (xv == 0.0) continue;
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q)
                    r(i * y.rows + p, j * y.cols + q) = xv * y(p, q);
        }
    return r;
}

inline Matrix blockdiag(const std::vector<Matrix>& blocks) {
    int r = 0, c = 0;
    for (const auto& b : blocks) { r += b.rows; c += b.cols; }
    Matrix m(r, c);
    int ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j) m(ro + i, co + j) = b(i, j);
        ro += b.rows;
        co += b.cols;
    }
    return m;
}

/// Contiguous sub-block starting at (r0, c0).
inline Matrix block(const Matrix& m, int r0, int c0, int nr, int nc) {
    Matrix r(nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) r(i, j) = m(r0 + i, c0 + j);
    return r;
}

inline void set_block(Matrix& m, int r0, int c0, const Matrix& b) {
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) m(r0 + i, c0 + j) = b(i, j);
}

inline double max_abs(const Matrix& m) {
    double r = 0.0;
    for (double x : m.a) r = std::max(r, std::fabs(x));
    return r;
}

inline double frobenius(const Matrix& m) {
    double s = 0.0;
    for (double x : m.a) s += x * x;
    return std::sqrt(s);
}

inline double trace(const Matrix& m) {
    if (!m.square()) throw NotSquare("trace: matrix not square");
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += m(i, i);
    return s;
}

inline bool all_finite(const Matrix& m) {
    for (double x : m.a)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Matrix symmetrize(const Matrix& m) {
    if (!m.square()) throw NotSquare("symmetrize: matrix not square");
    Matrix r(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
    return r;
}

}  // namespace nettrack
