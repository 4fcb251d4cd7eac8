#pragma once

#include <cstdint>

#include "nettrack/estimator.hpp"
#include "nettrack/model.hpp"

namespace nettrack {

struct NtcOptions {
    int max_iters = 5000;
    double tol = 1e-6;        // stop when the window improvement falls below this
    int window = 200;         // iterations per improvement check
    double step_scale = 0.5;  // subgradient step = step_scale / sqrt(t)
    double eps_infinite = 1e-9;  // achieved_norm at or below this flags infinite capacity
};

/// Outcome of minimizing ||W (x) I_n - B D_H||_2 over row-stochastic
/// graph-supported W and block-diagonal B. capacity = 1/achieved_norm,
/// flagged infinite when the norm reaches eps_infinite.
struct CapacityReport {
    bool infinite = false;
    double capacity = 1.0;  // +inf stored when infinite
    double achieved_norm = 1.0;
    Matrix W_star;   // N x N
    Matrix B_star;   // nN x nN block-diagonal
    int iterations = 0;
    bool converged = true;
};

/// Projected-subgradient norm minimization. When every neighborhood Gram
/// is invertible the exact optimum W = I, B_i = (sum_{j in N_i} H_j^T H_j)^-1
/// zeroes the objective and is returned analytically. Otherwise the solver
/// is warm-started from W = I, B = 0 and from the projected scalar-gain
/// design, and the best iterate is kept; the returned norm is always
/// feasible, hence an upper bound on the true minimum.
CapacityReport compute_ntc(const Plant& p, const NtcOptions& opts = {});

/// Capacity-based design: returns the minimizing (W, B) when
/// instability(p) < capacity; the returned design is verified stable
/// (spectral_norm of P < 1). Throws CapacityExceeded otherwise.
Design design_for_system(const Plant& p, const NtcOptions& opts = {});

struct PerfOptions {
    NtcOptions ntc;
    double margin = 1e-6;  // the norm constraint must hold with this slack
    int max_iters = 3000;
    double tol = 1e-6;
    int window = 200;
    double step_scale = 0.2;
};

/// Performance-aware design: minimizes ||B||_2 + ||W (x) I_n - B D_H||_2
/// subject to ||W (x) I_n - B D_H||_2 < 1/a with margin. Warm-started from
/// the capacity design; the objective never ends above the warm start's.
Design performance_design(const Plant& p, const PerfOptions& opts = {});

/// ||B||_2 + ||W (x) I_n - B D_H||_2 for reporting and tests.
double performance_objective(const Plant& p, const Design& d);

/// Per-agent steady-state bound for an arbitrary design:
///   (||V||_2 + a^2 N ||B||_2^2 ||Rbar||_2) / (1 - a^2 ||W (x) I_n - B D_H||_2^2)
/// Throws Unstable when a ||W (x) I_n - B D_H||_2 >= 1.
double steady_state_bound(const Plant& p, const Design& d);

}  // namespace nettrack
