#include "nettrack/model.hpp"

#include <cmath>
#include <string>

#include "nettrack/errors.hpp"
#include "nettrack/linalg.hpp"

namespace nettrack {

namespace {

// Symmetric within 1e-10 relative and eigenvalues >= -1e-10 relative.
void check_cov(Matrix& M, const std::string& what) {
    if (!M.square()) throw NotSquare(what + ": covariance not square");
    const double scale = std::max(1.0, max_abs(M));
    for (int i = 0; i < M.rows; ++i)
        for (int j = i + 1; j < M.cols; ++j)
            if (std::fabs(M(i, j) - M(j, i)) > 1e-10 * scale)
                throw NotSymmetric(what + ": covariance not symmetric");
    M = symmetrize(M);
    if (M.rows > 0 && min_eigenvalue(M) < -1e-10 * scale)
        throw NotPSD(what + ": covariance has a negative eigenvalue");
}

}  // namespace

void validate_plant(Plant& p) {
    const int n = p.A.rows;
    if (!p.A.square()) throw NotSquare("plant: A not square");
    if (p.graph.N != static_cast<int>(p.H.size()))
        throw DimensionMismatch("plant: graph has " + std::to_string(p.graph.N) + " vertices but " +
                                std::to_string(p.H.size()) + " observation matrices");
    if (p.H.size() != p.R.size())
        throw DimensionMismatch("plant: H and R counts differ");
    for (size_t i = 0; i < p.H.size(); ++i) {
        if (p.H[i].cols != n)
            throw DimensionMismatch("plant: H[" + std::to_string(i) + "] has " +
                                    std::to_string(p.H[i].cols) + " columns, expected " +
                                    std::to_string(n));
        if (p.H[i].rows < 1) throw DimensionMismatch("plant: H[" + std::to_string(i) + "] empty");
        if (p.R[i].rows != p.H[i].rows || p.R[i].cols != p.H[i].rows)
            throw DimensionMismatch("plant: R[" + std::to_string(i) + "] must be " +
                                    std::to_string(p.H[i].rows) + "x" + std::to_string(p.H[i].rows));
    }
    if (p.V.rows != n || p.V.cols != n) throw DimensionMismatch("plant: V must be n x n");
    if (!all_finite(p.A)) throw NonFinite("plant: A");
    for (const auto& h : p.H)
        if (!all_finite(h)) throw NonFinite("plant: H");
    check_cov(p.V, "plant V");
    for (size_t i = 0; i < p.R.size(); ++i) check_cov(p.R[i], "plant R[" + std::to_string(i) + "]");
}

Plant make_canonical_scalar(const Graph& g) {
    Plant p;
    const int n = g.N;
    p.A = identity(n);
    p.V = identity(n);
    for (int i = 0; i < n; ++i) {
        Matrix h(1, n);
        h(0, i) = 1.0;
        p.H.push_back(h);
        p.R.push_back(identity(1));
    }
    p.graph = g;
    return p;
}

Plant make_no_observation(const Graph& g) {
    Plant p;
    p.A = identity(1);
    p.V = identity(1);
    for (int i = 0; i < g.N; ++i) {
        p.H.push_back(Matrix(1, 1));
        p.R.push_back(identity(1));
    }
    p.graph = g;
    return p;
}

void set_instability(Plant& p, double a) {
    if (a < 0.0) throw BadParams("set_instability: a must be nonnegative");
    const double cur = spectral_norm(p.A);
    if (cur == 0.0) throw BadParams("set_instability: A is zero, cannot rescale");
    p.A = (a / cur) * p.A;
}

double instability(const Plant& p) { return spectral_norm(p.A); }

Matrix build_DH(const Plant& p) {
    const int n = p.n();
    const auto nb = closed_neighborhoods(p.graph);
    std::vector<Matrix> blocks;
    blocks.reserve(p.N());
    for (int i = 0; i < p.N(); ++i) {
        Matrix G(n, n);
        for (int j : nb[i]) G = G + transpose(p.H[j]) * p.H[j];
        blocks.push_back(symmetrize(G));
    }
    return blockdiag(blocks);
}

Matrix build_DH_self(const Plant& p) {
    std::vector<Matrix> blocks;
    blocks.reserve(p.N());
    for (int i = 0; i < p.N(); ++i) blocks.push_back(symmetrize(transpose(p.H[i]) * p.H[i]));
    return blockdiag(blocks);
}

ObsGram obs_gram(const Plant& p) {
    const int n = p.n();
    ObsGram og;
    og.G = Matrix(n, n);
    for (int i = 0; i < p.N(); ++i) og.G = og.G + transpose(p.H[i]) * p.H[i];
    og.G = symmetrize(og.G);
    const auto nb = closed_neighborhoods(p.graph);
    for (int i = 0; i < p.N(); ++i) {
        Matrix G(n, n);
        for (int j : nb[i]) G = G + transpose(p.H[j]) * p.H[j];
        og.per_neighborhood.push_back(symmetrize(G));
    }
    return og;
}

namespace {

bool gram_invertible(const Matrix& G) {
    const Spectrum s = sym_eigen(G);
    const double lmax = s.eigenvalues.back();
    if (lmax <= 0.0) return false;
    return s.eigenvalues.front() > 1e-9 * lmax;
}

}  // namespace

bool collectively_observable(const Plant& p) {
    const int n = p.n();
    int prows = 0;
    for (const auto& h : p.H) prows += h.rows;
    Matrix Hs(prows, n);
    int r = 0;
    for (const auto& h : p.H) {
        set_block(Hs, r, 0, h);
        r += h.rows;
    }
    // Stacked observability matrix [H; HA; ...; HA^(n-1)], rank via the Gram.
    Matrix O(prows * n, n);
    Matrix cur = Hs;
    for (int k = 0; k < n; ++k) {
        set_block(O, k * prows, 0, cur);
        cur = cur * p.A;
    }
    const Spectrum s = sym_eigen(symmetrize(transpose(O) * O));
    const double smax = std::sqrt(std::max(0.0, s.eigenvalues.back()));
    if (smax == 0.0) return false;
    // singular values of O above 1e-9 of the largest
    return std::sqrt(std::max(0.0, s.eigenvalues.front())) > 1e-9 * smax;
}

bool one_step_observable(const Plant& p) { return gram_invertible(obs_gram(p).G); }

bool neighborhood_one_step_observable(const Plant& p) {
    for (const auto& G : obs_gram(p).per_neighborhood)
        if (!gram_invertible(G)) return false;
    return true;
}

}  // namespace nettrack
