// Shared test helpers: a deterministic RNG, slow reference oracles that the
// fast library code is checked against, and random problem generators.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nettrack/graph.hpp"
#include "nettrack/linalg.hpp"
#include "nettrack/matrix.hpp"
#include "nettrack/model.hpp"

namespace testsup {

using nettrack::Graph;
using nettrack::Matrix;
using nettrack::Plant;
using nettrack::Vec;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : s_(seed) {
        for (int i = 0; i < 4; ++i) next();
    }
    std::uint64_t next() {
        s_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int n) { return int(next() % std::uint64_t(n)); }
    double gauss() {
        double u1 = uniform(), u2 = uniform();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
  private:
    std::uint64_t s_;
};

inline Matrix random_matrix(Rng& rng, int r, int c, double scale = 1.0) {
    Matrix M = nettrack::zeros(r, c);
    for (double& x : M.a) x = scale * (rng.uniform() - 0.5);
    return M;
}

inline Matrix random_sym(Rng& rng, int n, double scale = 1.0) {
    Matrix M = nettrack::zeros(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) M(i, j) = M(j, i) = scale * (rng.uniform() - 0.5);
    return M;
}

inline Matrix random_spd(Rng& rng, int n, double ridge = 0.1) {
    Matrix B = random_matrix(rng, n, n);
    Matrix M = B * nettrack::transpose(B);
    for (int i = 0; i < n; ++i) M(i, i) += ridge;
    return M;
}

// Gram-Schmidt on random columns; retries until full rank.
inline Matrix random_orthogonal(Rng& rng, int n) {
    Matrix Q = nettrack::zeros(n, n);
    int col = 0;
    while (col < n) {
        Vec v(n);
        for (double& x : v) x = rng.gauss();
        for (int k = 0; k < col; ++k) {
            double d = 0;
            for (int i = 0; i < n; ++i) d += Q(i, k) * v[i];
            for (int i = 0; i < n; ++i) v[i] -= d * Q(i, k);
        }
        const double nrm = nettrack::norm2(v);
        if (nrm < 1e-8) continue;
        for (int i = 0; i < n; ++i) Q(i, col) = v[i] / nrm;
        ++col;
    }
    return Q;
}

// Symmetric matrix with a prescribed spectrum.
inline Matrix with_spectrum(Rng& rng, const Vec& eigs) {
    const int n = int(eigs.size());
    const Matrix Q = random_orthogonal(rng, n);
    Matrix D = nettrack::zeros(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = eigs[i];
    return Q * D * nettrack::transpose(Q);
}

// Simplex projection by bisection on the threshold; independent of the
// sort-based routine under test.
inline Vec simplex_oracle(const Vec& v) {
    double lo = -1e9, hi = 1e9;
    for (double x : v) hi = std::max(hi, x);
    auto mass = [&](double th) {
        double s = 0;
        for (double x : v) s += std::max(x - th, 0.0);
        return s;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) > 1.0 ? lo : hi) = mid;
    }
    Vec out(v.size());
    const double th = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - th, 0.0);
    double s = 0;
    for (double x : out) s += x;
    for (double& x : out) x /= s;
    return out;
}

// Plain power iteration on M^T M; independent of the library warm-start logic.
inline double opnorm_oracle(const Matrix& M, int iters = 2000) {
    const Matrix G = nettrack::transpose(M) * M;
    Vec v(std::size_t(M.cols));
    Rng rng(987654321);
    for (double& x : v) x = rng.gauss();
    double nrm = nettrack::norm2(v);
    for (double& x : v) x /= nrm;
    double lam = 0;
    for (int it = 0; it < iters; ++it) {
        Vec w = nettrack::matvec(G, v);
        lam = nettrack::dot(v, w);
        nrm = nettrack::norm2(w);
        if (nrm == 0) return 0;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nrm;
    }
    return std::sqrt(std::max(lam, 0.0));
}

// Truncated Neumann series for the discrete Lyapunov equation.
inline Matrix dlyap_oracle(const Matrix& P, const Matrix& Sigma, int terms = 4000) {
    Matrix S = Sigma;
    Matrix T = P;
    Matrix term = Sigma;
    for (int k = 1; k < terms; ++k) {
        term = P * term * nettrack::transpose(P);
        S = S + term;
        if (nettrack::max_abs(term) < 1e-16 * std::max(1.0, nettrack::max_abs(S))) break;
        (void)T;
    }
    return S;
}

// Random connected graph: a spanning tree plus extra edges.
inline Graph random_connected_graph(Rng& rng, int N, double extra_edge_prob = 0.3) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < N; ++v) edges.emplace_back(rng.index(v), v);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (rng.uniform() < extra_edge_prob) edges.emplace_back(i, j);
    return nettrack::from_edges(N, edges);
}

// Random plant with square invertible-ish observations so neighborhood Gramians
// are well conditioned.
inline Plant random_observable_plant(Rng& rng, int N, int n) {
    Plant p;
    p.graph = random_connected_graph(rng, N);
    p.A = random_matrix(rng, n, n, 2.0);
    if (nettrack::max_abs(p.A) < 1e-6) p.A = nettrack::identity(n);
    p.V = random_spd(rng, n, 0.2);
    p.H.resize(std::size_t(N));
    p.R.resize(std::size_t(N));
    for (int i = 0; i < N; ++i) {
        Matrix Hi = random_matrix(rng, n, n, 1.0);
        for (int d = 0; d < n; ++d) Hi(d, d) += 1.5;  // keep it far from singular
        p.H[std::size_t(i)] = Hi;
        p.R[std::size_t(i)] = random_spd(rng, n, 0.2);
    }
    nettrack::validate_plant(p);
    return p;
}

// Two agents, scalar state x+ = 2x + v, both observing directly. Every
// closed form for this plant reduces to small rationals, which makes it the
// reference instance for exactness checks.
inline Plant k2_plant() {
    Plant p;
    p.graph = nettrack::complete(2);
    p.A = nettrack::zeros(1, 1);
    p.A(0, 0) = 2.0;
    p.V = nettrack::identity(1);
    p.H = {nettrack::ones(1, 1), nettrack::ones(1, 1)};
    p.R = {nettrack::identity(1), nettrack::identity(1)};
    nettrack::validate_plant(p);
    return p;
}

// Four agents on a ring, two-dimensional rotation dynamics, each agent
// observing one coordinate (alternating). No agent is observable alone;
// every closed neighborhood is.
inline Plant ring_rotation_plant(double a) {
    Plant p;
    p.graph = nettrack::circulant(4, 1);
    const double th = 0.5;
    p.A = nettrack::zeros(2, 2);
    p.A(0, 0) = std::cos(th);
    p.A(0, 1) = -std::sin(th);
    p.A(1, 0) = std::sin(th);
    p.A(1, 1) = std::cos(th);
    p.V = nettrack::identity(2);
    for (int i = 0; i < 4; ++i) {
        Matrix Hi = nettrack::zeros(1, 2);
        Hi(0, i % 2) = 1.0;
        p.H.push_back(Hi);
        p.R.push_back(nettrack::identity(1));
    }
    nettrack::validate_plant(p);
    nettrack::set_instability(p, a);
    return p;
}

}  // namespace testsup
