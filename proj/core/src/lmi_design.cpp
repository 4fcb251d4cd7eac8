#include "nettrack/lmi_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nettrack/errors.hpp"
#include "nettrack/linalg.hpp"
#include "nettrack/norm_design.hpp"
#include "nettrack/scalar_design.hpp"

namespace nettrack {

Matrix assemble_Ahat(const Plant& p, const Matrix& W, const Matrix& B) {
    const int n = p.n(), N = p.N();
    if (W.rows != N || W.cols != N) throw DimensionMismatch("assemble_Ahat: W must be N x N");
    if (B.rows != n * N || B.cols != n * N)
        throw DimensionMismatch("assemble_Ahat: B must be nN x nN");
    return kron(W, p.A) - kron(identity(N), p.A) * B * build_DH(p);
}

namespace {

Matrix two_block(const Matrix& TL, const Matrix& TR, const Matrix& BL, const Matrix& BR) {
    const int m = TL.rows;
    Matrix M(2 * m, 2 * m);
    set_block(M, 0, 0, TL);
    set_block(M, 0, m, TR);
    set_block(M, m, 0, BL);
    set_block(M, m, m, BR);
    return M;
}

bool structure_ok(const Plant& p, const Matrix& W, const Matrix& B) {
    const int n = p.n(), N = p.N();
    if (W.rows != N || W.cols != N || B.rows != n * N || B.cols != n * N) return false;
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) {
            const double w = W(i, j);
            if (i != j && !has_edge(p.graph, i, j) && w != 0.0) return false;
            if (w < 0.0) return false;
            s += w;
        }
        if (std::fabs(s - 1.0) > 1e-10) return false;
    }
    for (int i = 0; i < n * N; ++i)
        for (int j = 0; j < n * N; ++j)
            if (i / n != j / n && B(i, j) != 0.0) return false;
    return true;
}

}  // namespace

bool lmi_feasible(const Plant& p, const Matrix& X, const Matrix& Y, const Matrix& W,
                  const Matrix& B, double tol) {
    if (!structure_ok(p, W, B)) return false;
    const int nN = p.n() * p.N();
    if (X.rows != nN || X.cols != nN || Y.rows != nN || Y.cols != nN) return false;
    const Matrix Ahat = assemble_Ahat(p, W, B);
    if (min_eigenvalue(symmetrize(X)) <= tol) return false;
    if (min_eigenvalue(symmetrize(Y)) <= tol) return false;
    const Matrix M1 = two_block(symmetrize(X), transpose(Ahat), Ahat, symmetrize(Y));
    if (min_eigenvalue(symmetrize(M1)) <= tol) return false;
    const Matrix M2 = two_block(symmetrize(X), identity(nN), identity(nN), symmetrize(Y));
    return min_eigenvalue(symmetrize(M2)) >= -tol;
}

double trace_objective(const Matrix& X, const Matrix& Y, const Matrix& Xt, const Matrix& Yt) {
    if (X.rows != Yt.rows || Y.rows != Xt.rows || !X.square() || !Y.square())
        throw DimensionMismatch("trace_objective: shapes");
    double s = 0.0;
    for (int i = 0; i < X.rows; ++i)
        for (int j = 0; j < X.cols; ++j) s += Yt(i, j) * X(j, i) + Xt(i, j) * Y(j, i);
    return s;
}

namespace {

struct StructuredLstsq {
    // Least-squares pullback of a dense nN x nN target onto the affine
    // family Ahat(W, B); parameters are the supported W entries followed
    // by the B block entries.
    std::vector<std::pair<int, int>> wslots;
    int n = 0, N = 0, nN = 0, P = 0;
    Matrix G;    // (nN)^2 x P response matrix
    Matrix GtG;  // normal matrix, ridge-regularized

    StructuredLstsq(const Plant& p, const Matrix& DH) {
        n = p.n();
        N = p.N();
        nN = n * N;
        const auto nb = closed_neighborhoods(p.graph);
        for (int i = 0; i < N; ++i)
            for (int j : nb[i]) wslots.emplace_back(i, j);
        P = static_cast<int>(wslots.size()) + N * n * n;
        G = Matrix(nN * nN, P);
        const Matrix& A = p.A;
        int col = 0;
        for (const auto& [i, j] : wslots) {
            // response of w_ij: E_ij (x) A
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    G((i * n + r) * nN + (j * n + c), col) = A(r, c);
            ++col;
        }
        for (int k = 0; k < N; ++k)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    // response of B_k(r,c): -(I (x) A) e_{kn+r} e_{kn+c}^T DH
                    for (int s = 0; s < n; ++s) {
                        const double av = A(s, r);
                        if (av == 0.0) continue;
                        for (int v = 0; v < nN; ++v) {
                            const double dv = DH(k * n + c, v);
                            if (dv == 0.0) continue;
                            G((k * n + s) * nN + v, col) -= av * dv;
                        }
                    }
                    ++col;
                }
        GtG = transpose(G) * G;
        for (int d = 0; d < P; ++d) GtG(d, d) += 1e-10;
    }

    void pull_back(const Matrix& target, Matrix& W, Matrix& B) const {
        Matrix rhs(P, 1);
        for (int c = 0; c < P; ++c) {
            double s = 0.0;
            for (int rr = 0; rr < nN; ++rr)
                for (int cc = 0; cc < nN; ++cc) s += G(rr * nN + cc, c) * target(rr, cc);
            rhs(c, 0) = s;
        }
        const Matrix theta = solve(GtG, rhs);
        W = Matrix(N, N);
        B = Matrix(nN, nN);
        int col = 0;
        for (const auto& [i, j] : wslots) W(i, j) = theta(col++, 0);
        for (int k = 0; k < N; ++k)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) B(k * n + r, k * n + c) = theta(col++, 0);
    }
};

struct Candidate {
    Matrix W, B;
    double rho = std::numeric_limits<double>::infinity();
};

// splitmix64, enough randomness for start diversification
struct MiniRng {
    std::uint64_t s;
    explicit MiniRng(std::uint64_t seed) : s(seed ^ 0x9E3779B97F4A7C15ULL) {}
    double uniform() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

Matrix clip_psd(const Matrix& M, double floor_at) {
    const Spectrum s = sym_eigen(symmetrize(M));
    const int m = M.rows;
    Matrix D(m, m);
    for (int i = 0; i < m; ++i) D(i, i) = std::max(s.eigenvalues[i], floor_at);
    return symmetrize(s.eigenvectors * D * transpose(s.eigenvectors));
}

}  // namespace

CclResult ccl_design(const Plant& p, const CclOptions& opts) {
    const int n = p.n(), N = p.N(), nN = n * N;
    const Matrix DH = build_DH(p);
    const auto support = closed_neighborhoods(p.graph);

    // Feasible-start search, in preference order.
    std::vector<Candidate> cands;
    if (opts.use_warm_starts) {
        const ScalarGainReport sr = scalar_capacity(p);
        if (sr.lambda_max > 0.0) {
            Matrix W = project_row_stochastic(identity(N) - sr.alpha_opt * laplacian(p.graph),
                                              support);
            cands.push_back({W, sr.alpha_opt * identity(nN), 0.0});
        }
        NtcOptions nopts;
        nopts.max_iters = 1500;
        const CapacityReport rep = compute_ntc(p, nopts);
        cands.push_back({rep.W_star, rep.B_star, 0.0});
    }
    MiniRng rng(opts.seed);
    for (int k = 0; k < opts.random_starts; ++k) {
        Matrix W(N, N), B(nN, nN);
        for (int i = 0; i < N; ++i)
            for (int j : support[i]) W(i, j) = rng.uniform();
        W = project_row_stochastic(W, support);
        for (int b = 0; b < N; ++b)
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    B(b * n + r, b * n + c) = 0.6 * (rng.uniform() - 0.5);
        cands.push_back({std::move(W), std::move(B), 0.0});
    }

    CclResult res;
    Candidate best;
    for (auto& c : cands) {
        c.rho = spectral_radius(assemble_Ahat(p, c.W, c.B));
        if (c.rho < best.rho) best = c;
        if (c.rho < 1.0 - opts.rho_tol) break;  // starts are in preference order
    }

    if (best.rho < 1.0 - opts.rho_tol) {
        // Already stable: X from the Lyapunov identity X - Ahat^T X Ahat = I,
        // Y = X^-1, which meets both LMIs and puts the trace at 2nN.
        const Matrix Ahat = assemble_Ahat(p, best.W, best.B);
        const Matrix X = dlyap(transpose(Ahat), identity(nN), 1e-10);
        const Matrix Y = symmetrize(inverse(X));
        res.status = CclResult::Status::converged;
        res.W = best.W;
        res.B = best.B;
        res.X = X;
        res.Y = Y;
        res.trace_sequence.push_back(trace_objective(X, Y, X, Y));
        res.final_rho = best.rho;
        res.iterations = 0;
        Design d;
        d.kind = Design::Kind::full;
        d.W = best.W;
        d.B = best.B;
        d.provenance = Design::Provenance::lmi_ccl;
        res.design = d;
        return res;
    }

    // Iterate from the least-unstable candidate.
    Matrix W = best.W, B = best.B;
    Matrix Ahat = assemble_Ahat(p, W, B);
    const double c0 = 2.0 * std::max(1.0, spectral_norm(Ahat));
    Matrix X = c0 * identity(nN), Y = c0 * identity(nN);
    const StructuredLstsq pullback(p, DH);

    double s_prev = trace_objective(X, Y, X, Y);
    res.trace_sequence.push_back(s_prev);
    double best_rho = best.rho;
    Matrix bestW = W, bestB = B, bestX = X, bestY = Y;

    int stalled = 0;
    for (int outer = 1; outer <= opts.max_outer; ++outer) {
        res.iterations = outer;
        const Matrix Xt = X, Yt = Y;
        double eta = 0.4 * std::min(min_eigenvalue(symmetrize(X)), min_eigenvalue(symmetrize(Y))) /
                     std::max({spectral_norm(Xt), spectral_norm(Yt), 1e-12});
        bool accepted = false;
        for (int attempt = 0; attempt < 3 && !accepted; ++attempt, eta *= 0.3) {
            Matrix Xn = symmetrize(X - eta * Yt);
            Matrix Yn = symmetrize(Y - eta * Xt);
            Matrix Wn = W, Bn = B;
            for (int round = 0; round < opts.max_inner; ++round) {
                // coupling cone [[X, I], [I, Y]] >= 0
                Matrix M2 = clip_psd(two_block(Xn, identity(nN), identity(nN), Yn), 0.0);
                Xn = symmetrize(block(M2, 0, 0, nN, nN));
                Yn = symmetrize(block(M2, nN, nN, nN, nN));
                // stability cone [[X, Ahat^T], [Ahat, Y]] > 0, then pull the
                // off-diagonal block back onto the structured family
                Matrix Ah = assemble_Ahat(p, Wn, Bn);
                Matrix M1 = clip_psd(two_block(Xn, transpose(Ah), Ah, Yn), opts.lmi_tol);
                Xn = symmetrize(block(M1, 0, 0, nN, nN));
                Yn = symmetrize(block(M1, nN, nN, nN, nN));
                pullback.pull_back(block(M1, nN, 0, nN, nN), Wn, Bn);
                Wn = project_row_stochastic(Wn, support);
                Ah = assemble_Ahat(p, Wn, Bn);
                const double r1 = min_eigenvalue(symmetrize(two_block(Xn, transpose(Ah), Ah, Yn)));
                const double r2 =
                    min_eigenvalue(symmetrize(two_block(Xn, identity(nN), identity(nN), Yn)));
                if (r1 > 0.0 && r2 >= -opts.lmi_tol) break;
            }
            const double s_new = trace_objective(Xn, Yn, Xt, Yt);
            if (s_new <= s_prev + 1e-12 &&
                min_eigenvalue(symmetrize(Xn)) > 0.0 && min_eigenvalue(symmetrize(Yn)) > 0.0) {
                X = Xn;
                Y = Yn;
                W = Wn;
                B = Bn;
                s_prev = std::min(s_prev, s_new);
                accepted = true;
            }
        }
        res.trace_sequence.push_back(s_prev);
        if (!accepted) ++stalled;

        Ahat = assemble_Ahat(p, W, B);
        const double rho = spectral_radius(Ahat);
        if (rho < best_rho) {
            best_rho = rho;
            bestW = W;
            bestB = B;
            bestX = X;
            bestY = Y;
        }
        if (rho < 1.0 - opts.rho_tol) {
            res.status = CclResult::Status::converged;
            res.W = W;
            res.B = B;
            res.X = X;
            res.Y = Y;
            res.final_rho = rho;
            Design d;
            d.kind = Design::Kind::full;
            d.W = W;
            d.B = B;
            d.provenance = Design::Provenance::lmi_ccl;
            res.design = d;
            return res;
        }
        if (opts.stop_on_trace && s_prev <= 2.0 * nN + opts.trace_eps) break;

        const int w = opts.stall_window;
        const int len = static_cast<int>(res.trace_sequence.size());
        if (len > w) {
            const double drop = res.trace_sequence[len - 1 - w] - res.trace_sequence[len - 1];
            if (drop < opts.trace_tol || stalled >= w) break;
        }
    }

    res.status = res.iterations >= opts.max_outer ? CclResult::Status::max_iterations
                                                  : CclResult::Status::infeasible;
    res.W = bestW;
    res.B = bestB;
    res.X = bestX;
    res.Y = bestY;
    res.final_rho = best_rho;
    return res;
}

}  // namespace nettrack
