#pragma once

#include <optional>
#include <vector>

#include "nettrack/matrix.hpp"

namespace nettrack {

/// Eigendecomposition of a symmetric matrix. Eigenvalues ascending;
/// eigenvectors holds the matching orthonormal columns.
struct Spectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Cyclic Jacobi eigendecomposition. Input must be square and symmetric
/// within 1e-10 relative tolerance; it is symmetrized internally before
/// sweeping so roundoff-level asymmetry cannot leak into the result.
Spectrum sym_eigen(const Matrix& M);

/// Largest singular value, computed as sqrt(lambda_max(M^T M)).
double spectral_norm(const Matrix& M);

/// Largest eigenvalue modulus of a general square matrix
/// (Hessenberg reduction followed by implicit double-shift QR).
double spectral_radius(const Matrix& M);

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
Vec project_simplex(const Vec& v);

/// Per-row simplex projection restricted to a support pattern.
/// support[i] lists the columns row i may use; all other entries of the
/// result are exactly zero. Throws EmptySupport when a row has no columns.
Matrix project_row_stochastic(const Matrix& W, const std::vector<std::vector<int>>& support);

/// Solves S = P S P^T + Sigma by doubling accumulation of the series
/// sum_j P^j Sigma (P^T)^j. Requires rho(P) < 1 - 1e-9.
Matrix dlyap(const Matrix& P, const Matrix& Sigma, double tol = 1e-10);

/// Gaussian elimination with partial pivoting; throws Singular.
Matrix solve(Matrix A, Matrix B);
Matrix inverse(const Matrix& A);

inline Vec solve(const Matrix& A, const Vec& b) {
    Matrix B(static_cast<int>(b.size()), 1);
    B.a = b;
    const Matrix X = solve(A, B);
    return X.a;
}

struct SingularPair {
    double sigma = 0.0;
    Vec u;  // left singular vector
    Vec v;  // right singular vector
};

/// Power iteration on M^T M for the top singular triple. v0 seeds the
/// iteration when its size matches, which lets callers warm-start.
SingularPair top_singular(const Matrix& M, const Vec& v0 = {}, double tol = 1e-10,
                          int max_iters = 300);

/// Symmetric square root with eigenvalues floored at zero; used to turn
/// covariance matrices into sampling factors.
Matrix psd_sqrt(const Matrix& M);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& M);

}  // namespace nettrack
