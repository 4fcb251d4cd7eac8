#include "nettrack/scalar_design.hpp"

#include <cmath>
#include <limits>

#include "nettrack/errors.hpp"
#include "nettrack/linalg.hpp"

namespace nettrack {

Matrix build_Q(const Plant& p) {
    return symmetrize(kron(laplacian(p.graph), identity(p.n())) + build_DH(p));
}

namespace {

struct QEig {
    double l1;  // lambda_min, floored at 0 (Q is PSD by construction)
    double lm;
};

QEig q_eigs(const Plant& p) {
    const Spectrum s = sym_eigen(build_Q(p));
    double l1 = s.eigenvalues.front();
    const double lm = std::max(0.0, s.eigenvalues.back());
    // snap the bottom eigenvalue so an exactly-singular Q (no observations,
    // connected graph) reports capacity exactly 1
    if (l1 < 1e-9 * std::max(1.0, lm)) l1 = 0.0;
    return {l1, lm};
}

void fill_closed_forms(ScalarGainReport& r) {
    const double l1 = r.lambda_min, lm = r.lambda_max;
    if (lm <= 0.0) {  // Q = 0: every alpha leaves ||I - alpha Q|| = 1
        r.C_alpha = 1.0;
        r.capacity_infinite = false;
        r.alpha_opt = 0.0;
        r.min_norm = 1.0;
        return;
    }
    r.alpha_opt = 2.0 / (lm + l1);
    r.min_norm = (lm - l1) / (lm + l1);
    if (lm - l1 <= 1e-12 * lm) {  // Q = c I: the norm can be driven to 0
        r.capacity_infinite = true;
        r.C_alpha = std::numeric_limits<double>::infinity();
        r.min_norm = 0.0;
    } else if (l1 == 0.0) {
        r.C_alpha = 1.0;
        r.min_norm = 1.0;
    } else {
        r.C_alpha = (lm + l1) / (lm - l1);
    }
}

}  // namespace

ScalarGainReport scalar_capacity(const Plant& p) {
    ScalarGainReport r;
    r.Q = build_Q(p);
    const QEig e = q_eigs(p);
    r.lambda_min = e.l1;
    r.lambda_max = e.lm;
    fill_closed_forms(r);
    return r;
}

std::optional<std::pair<double, double>> alpha_interval(const Plant& p, double a) {
    if (a <= 0.0) throw BadParams("alpha_interval: a must be positive");
    const ScalarGainReport r = scalar_capacity(p);
    if (!(a < r.C_alpha)) return std::nullopt;
    double lo;
    if (a <= 1.0) {
        lo = 0.0;  // alpha >= 0; the (a-1)/(a l1) endpoint is nonpositive here
    } else {
        lo = (a - 1.0) / (a * r.lambda_min);  // a < C_alpha and a > 1 force lambda_min > 0
    }
    const double hi = (a + 1.0) / (a * r.lambda_max);
    return std::make_pair(lo, hi);
}

ScalarGainReport scalar_report(const Plant& p, double a) {
    ScalarGainReport r = scalar_capacity(p);
    r.a = a;
    r.interval = alpha_interval(p, a);
    return r;
}

double interval_length(const Plant& p, double a) {
    const ScalarGainReport r = scalar_capacity(p);
    if (!(a < r.C_alpha))
        throw CapacityExceeded(r.C_alpha, r.capacity_infinite,
                               "interval_length: a >= C_alpha");
    if (r.lambda_min <= 0.0) return std::numeric_limits<double>::infinity();
    return (1.0 / r.lambda_min - 1.0 / r.lambda_max) * (r.C_alpha / a - 1.0);
}

double scalar_performance_bound(const Plant& p, double alpha) {
    const double a = instability(p);
    const Matrix Q = build_Q(p);
    const int nN = Q.rows;
    const double norm = spectral_norm(identity(nN) - alpha * Q);
    if (a * norm >= 1.0)
        throw Unstable("scalar_performance_bound: a ||I - alpha Q|| = " + std::to_string(a * norm));
    std::vector<Matrix> rblocks;
    for (int i = 0; i < p.N(); ++i)
        rblocks.push_back(symmetrize(transpose(p.H[i]) * p.R[i] * p.H[i]));
    const double rbar_norm = spectral_norm(blockdiag(rblocks));
    const double vnorm = spectral_norm(p.V);
    const double num = vnorm + alpha * alpha * a * a * p.N() * rbar_norm;
    return num / (1.0 - a * a * norm * norm);
}

}  // namespace nettrack
