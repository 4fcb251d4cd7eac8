#include "nettrack/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nettrack/errors.hpp"

namespace nettrack {

namespace {

void require_finite(const Matrix& M, const char* who) {
    if (!all_finite(M)) throw NonFinite(std::string(who) + ": non-finite entries");
}

// One Jacobi rotation zeroing A(p,q), accumulating into V.
void jacobi_rotate(Matrix& A, Matrix& V, int p, int q) {
    const double apq = A(p, q);
    if (apq == 0.0) return;
    const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
    double t;
    if (std::fabs(theta) > 1e307) {
        t = 1.0 / (2.0 * theta);
    } else {
        t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);
    const int n = A.rows;

    A(p, p) -= t * apq;
    A(q, q) += t * apq;
    A(p, q) = 0.0;
    A(q, p) = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k != p && k != q) {
            const double akp = A(k, p), akq = A(k, q);
            A(k, p) = akp - s * (akq + tau * akp);
            A(p, k) = A(k, p);
            A(k, q) = akq + s * (akp - tau * akq);
            A(q, k) = A(k, q);
        }
        const double vkp = V(k, p), vkq = V(k, q);
        V(k, p) = vkp - s * (vkq + tau * vkp);
        V(k, q) = vkq + s * (vkp - tau * vkq);
    }
}

double offdiag_frobenius(const Matrix& A) {
    double s = 0.0;
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (i != j) s += A(i, j) * A(i, j);
    return std::sqrt(s);
}

}  // namespace

Spectrum sym_eigen(const Matrix& M) {
    if (!M.square()) throw NotSquare("sym_eigen: matrix not square");
    require_finite(M, "sym_eigen");
    const int n = M.rows;
    const double scale = max_abs(M);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(M(i, j) - M(j, i)) > 1e-10 * std::max(1.0, scale))
                throw NotSymmetric("sym_eigen: asymmetry exceeds tolerance");

    Matrix A = symmetrize(M);
    Matrix V = identity(n);
    const double target = 1e-12 * std::max(frobenius(A), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_frobenius(A) <= target) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::fabs(A(p, q)) > 0.0) jacobi_rotate(A, V, p, q);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return A(i, i) < A(j, j); });

    Spectrum s;
    s.eigenvalues.resize(n);
    s.eigenvectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        s.eigenvalues[j] = A(order[j], order[j]);
        for (int i = 0; i < n; ++i) s.eigenvectors(i, j) = V(i, order[j]);
    }
    return s;
}

double spectral_norm(const Matrix& M) {
    require_finite(M, "spectral_norm");
    if (M.rows == 0 || M.cols == 0) return 0.0;
    const Matrix G = transpose(M) * M;
    const Spectrum s = sym_eigen(symmetrize(G));
    return std::sqrt(std::max(0.0, s.eigenvalues.back()));
}

double min_eigenvalue(const Matrix& M) { return sym_eigen(M).eigenvalues.front(); }

namespace {

// Householder reduction to upper Hessenberg form, in place. Eigenvalues
// only, so the transform is not accumulated.
void hessenberg(Matrix& H) {
    const int n = H.rows;
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::fabs(H(i, k));
        if (scale == 0.0) continue;
        Vec v(n, 0.0);
        double sigma = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = H(i, k) / scale;
            sigma += v[i] * v[i];
        }
        double alpha = std::sqrt(sigma);
        if (v[k + 1] > 0.0) alpha = -alpha;
        const double beta = sigma - alpha * v[k + 1];
        if (beta == 0.0) continue;
        v[k + 1] -= alpha;
        // H <- P H P with P = I - v v^T / beta
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * H(i, j);
            s /= beta;
            for (int i = k + 1; i < n; ++i) H(i, j) -= s * v[i];
        }
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += H(i, j) * v[j];
            s /= beta;
            for (int j = k + 1; j < n; ++j) H(i, j) -= s * v[j];
        }
        H(k + 1, k) = scale * alpha;
        for (int i = k + 2; i < n; ++i) H(i, k) = 0.0;
    }
}

// Eigenvalue moduli of a real 2x2 block.
void push_block2_moduli(double a, double b, double c, double d, std::vector<double>& out) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        out.push_back(std::fabs(0.5 * tr + r));
        out.push_back(std::fabs(0.5 * tr - r));
    } else {
        const double m = std::sqrt(det);  // complex pair, |lambda| = sqrt(det)
        out.push_back(m);
        out.push_back(m);
    }
}

// Householder similarity acting on three rows/cols of the active block.
void apply_bulge(Matrix& H, int k, int l, int m, double x, double y, double z) {
    const int n = H.rows;
    (void)n;
    double s = std::fabs(x) + std::fabs(y) + std::fabs(z);
    if (s == 0.0) return;
    x /= s;
    y /= s;
    z /= s;
    double alpha = std::sqrt(x * x + y * y + z * z);
    if (x > 0.0) alpha = -alpha;
    if (alpha == 0.0) return;
    const double v0 = x - alpha, v1 = y, v2 = z;
    const double beta = -alpha * v0;  // = (v0^2+v1^2+v2^2)/2
    if (beta == 0.0) return;
    const int r0 = k, r1 = k + 1, r2 = k + 2;
    const int jlo = std::max(l, k - 1);
    for (int j = jlo; j <= m; ++j) {
        double t = (v0 * H(r0, j) + v1 * H(r1, j) + v2 * H(r2, j)) / beta;
        H(r0, j) -= t * v0;
        H(r1, j) -= t * v1;
        H(r2, j) -= t * v2;
    }
    const int ihi = std::min(m, k + 3);
    for (int i = l; i <= ihi; ++i) {
        double t = (v0 * H(i, r0) + v1 * H(i, r1) + v2 * H(i, r2)) / beta;
        H(i, r0) -= t * v0;
        H(i, r1) -= t * v1;
        H(i, r2) -= t * v2;
    }
}

// Final 2-row rotation clearing the bulge remnant at the block's bottom.
void apply_bulge2(Matrix& H, int k, int l, int m, double x, double y) {
    double s = std::fabs(x) + std::fabs(y);
    if (s == 0.0) return;
    x /= s;
    y /= s;
    double alpha = std::sqrt(x * x + y * y);
    if (x > 0.0) alpha = -alpha;
    if (alpha == 0.0) return;
    const double v0 = x - alpha, v1 = y;
    const double beta = -alpha * v0;
    if (beta == 0.0) return;
    const int r0 = k, r1 = k + 1;
    for (int j = std::max(l, k - 1); j <= m; ++j) {
        double t = (v0 * H(r0, j) + v1 * H(r1, j)) / beta;
        H(r0, j) -= t * v0;
        H(r1, j) -= t * v1;
    }
    for (int i = l; i <= std::min(m, k + 2); ++i) {
        double t = (v0 * H(i, r0) + v1 * H(i, r1)) / beta;
        H(i, r0) -= t * v0;
        H(i, r1) -= t * v1;
    }
}

void francis_step(Matrix& H, int l, int m, bool exceptional) {
    double s, t;
    if (exceptional) {
        const double w = std::fabs(H(m, m - 1)) + std::fabs(H(m - 1, m - 2));
        s = 1.5 * w;
        t = w * w;
    } else {
        s = H(m - 1, m - 1) + H(m, m);
        t = H(m - 1, m - 1) * H(m, m) - H(m - 1, m) * H(m, m - 1);
    }
    double x = H(l, l) * H(l, l) + H(l, l + 1) * H(l + 1, l) - s * H(l, l) + t;
    double y = H(l + 1, l) * (H(l, l) + H(l + 1, l + 1) - s);
    double z = H(l + 1, l) * H(l + 2, l + 1);
    for (int k = l; k <= m - 3; ++k) {
        apply_bulge(H, k, l, m, x, y, z);
        x = H(k + 1, k);
        y = H(k + 2, k);
        z = (k + 3 <= m) ? H(k + 3, k) : 0.0;
    }
    apply_bulge(H, m - 2, l, m, x, y, z);
    apply_bulge2(H, m - 1, l, m, H(m - 1, m - 2), H(m, m - 2));
    H(m, m - 2) = 0.0;
}

}  // namespace

double spectral_radius(const Matrix& M) {
    if (!M.square()) throw NotSquare("spectral_radius: matrix not square");
    require_finite(M, "spectral_radius");
    const int n = M.rows;
    if (n == 0) return 0.0;
    if (n == 1) return std::fabs(M(0, 0));
    std::vector<double> moduli;
    if (n == 2) {
        push_block2_moduli(M(0, 0), M(0, 1), M(1, 0), M(1, 1), moduli);
        return *std::max_element(moduli.begin(), moduli.end());
    }

    Matrix H = M;
    hessenberg(H);
    const double tol = 1e-10;
    int m = n - 1;
    int iters = 0, since_deflate = 0;
    const int max_iters = 500;
    while (m >= 0 && iters < max_iters) {
        // deflate negligible subdiagonals
        for (int i = 1; i <= m; ++i) {
            const double denom = std::fabs(H(i - 1, i - 1)) + std::fabs(H(i, i));
            if (std::fabs(H(i, i - 1)) <= tol * std::max(denom, 1e-300)) H(i, i - 1) = 0.0;
        }
        int l = m;
        while (l > 0 && H(l, l - 1) != 0.0) --l;
        if (l == m) {
            moduli.push_back(std::fabs(H(m, m)));
            --m;
            since_deflate = 0;
            continue;
        }
        if (l == m - 1) {
            push_block2_moduli(H(l, l), H(l, m), H(m, l), H(m, m), moduli);
            m -= 2;
            since_deflate = 0;
            continue;
        }
        francis_step(H, l, m, since_deflate > 0 && since_deflate % 10 == 0);
        ++iters;
        ++since_deflate;
    }
    // Budget exhausted: read the remaining (approximately converged) blocks off.
    while (m >= 0) {
        if (m == 0 || H(m, m - 1) == 0.0) {
            moduli.push_back(std::fabs(H(m, m)));
            --m;
        } else {
            push_block2_moduli(H(m - 1, m - 1), H(m - 1, m), H(m, m - 1), H(m, m), moduli);
            m -= 2;
        }
    }
    return *std::max_element(moduli.begin(), moduli.end());
}

Vec project_simplex(const Vec& v) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw EmptySupport("project_simplex: empty input");
    Vec u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    for (int j = 0; j < n; ++j) {
        css += u[j];
        const double cand = (css - 1.0) / (j + 1);
        if (u[j] - cand > 0.0) {
            rho = j + 1;
            theta = cand;
        }
    }
    (void)rho;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = std::max(v[i] - theta, 0.0);
    return x;
}

Matrix project_row_stochastic(const Matrix& W, const std::vector<std::vector<int>>& support) {
    if (static_cast<int>(support.size()) != W.rows)
        throw DimensionMismatch("project_row_stochastic: support size != row count");
    Matrix R(W.rows, W.cols);
    for (int i = 0; i < W.rows; ++i) {
        const auto& sup = support[i];
        if (sup.empty()) throw EmptySupport("project_row_stochastic: row " + std::to_string(i));
        Vec v(sup.size());
        for (size_t k = 0; k < sup.size(); ++k) v[k] = W(i, sup[k]);
        Vec x = project_simplex(v);
        for (size_t k = 0; k < sup.size(); ++k) R(i, sup[k]) = x[k];
    }
    return R;
}

Matrix dlyap(const Matrix& P, const Matrix& Sigma, double tol) {
    if (!P.square() || !Sigma.square() || P.rows != Sigma.rows)
        throw DimensionMismatch("dlyap: shape mismatch");
    const double rho = spectral_radius(P);
    if (rho >= 1.0 - 1e-9) throw Unstable("dlyap: spectral radius " + std::to_string(rho));

    // S_{k+1} = S_k + T_k S_k T_k^T with T_{k+1} = T_k^2 sums the series
    // with doubling; the increment norm collapses like rho^(2^k).
    Matrix S = symmetrize(Sigma);
    Matrix T = P;
    const double inc_target = 0.001 * tol;
    for (int k = 0; k < 200; ++k) {
        const Matrix inc = T * S * transpose(T);
        S = symmetrize(S + inc);
        if (max_abs(inc) <= inc_target * std::max(1.0, max_abs(S))) break;
        T = T * T;
        if (max_abs(T) == 0.0) break;
    }
    return S;
}

Matrix solve(Matrix A, Matrix B) {
    if (!A.square()) throw NotSquare("solve: A not square");
    if (A.rows != B.rows) throw DimensionMismatch("solve: rhs rows");
    const int n = A.rows;
    const double scale = max_abs(A);
    if (scale == 0.0) throw Singular("solve: zero matrix");
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(A(i, k)) > std::fabs(A(piv, k))) piv = i;
        if (std::fabs(A(piv, k)) <= 1e-14 * scale) throw Singular("solve: pivot " + std::to_string(k));
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            for (int j = 0; j < B.cols; ++j) std::swap(B(k, j), B(piv, j));
        }
        const double akk = A(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k) / akk;
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            for (int j = 0; j < B.cols; ++j) B(i, j) -= f * B(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j < B.cols; ++j) {
            double s = B(k, j);
            for (int i = k + 1; i < n; ++i) s -= A(k, i) * B(i, j);
            B(k, j) = s / A(k, k);
        }
    }
    return B;
}

Matrix inverse(const Matrix& A) { return solve(A, identity(A.rows)); }

SingularPair top_singular(const Matrix& M, const Vec& v0, double tol, int max_iters) {
    require_finite(M, "top_singular");
    const int c = M.cols;
    Vec v;
    if (static_cast<int>(v0.size()) == c && norm2(v0) > 0.0) {
        v = v0;
    } else {
        v.assign(c, 1.0);
        for (int i = 0; i < c; ++i) v[i] += 0.01 * (i + 1) / c;  // break symmetry deterministically
    }
    double nv = norm2(v);
    for (auto& x : v) x /= nv;

    const Matrix Mt = transpose(M);
    double sigma = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vec mv = matvec(M, v);
        Vec w = matvec(Mt, mv);
        const double nw = norm2(w);
        if (nw == 0.0) {
            sigma = 0.0;
            break;
        }
        for (auto& x : w) x /= nw;
        const double next = std::sqrt(nw);  // sqrt of Rayleigh quotient on M^T M
        v = w;
        if (std::fabs(next - sigma) <= tol * std::max(1.0, next)) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    SingularPair out;
    out.sigma = sigma;
    out.v = v;
    Vec mv = matvec(M, v);
    const double nmv = norm2(mv);
    if (nmv > 0.0)
        for (auto& x : mv) x /= nmv;
    out.u = mv;
    return out;
}

Matrix psd_sqrt(const Matrix& M) {
    const Spectrum s = sym_eigen(M);
    const int n = M.rows;
    Matrix D(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = std::sqrt(std::max(0.0, s.eigenvalues[i]));
    return s.eigenvectors * D * transpose(s.eigenvectors);
}

}  // namespace nettrack
