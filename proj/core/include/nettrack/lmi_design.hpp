#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nettrack/estimator.hpp"
#include "nettrack/model.hpp"

namespace nettrack {

/// Ahat = W (x) A - (I_N (x) A) B D_H; identical to the error-dynamics P,
/// factored differently.
Matrix assemble_Ahat(const Plant& p, const Matrix& W, const Matrix& B);

/// Feasibility of the linearized stability LMIs at (X, Y, W, B):
///   [[X, Ahat^T], [Ahat, Y]] > 0 (strict, margin tol)
///   [[X, I], [I, Y]] >= 0 (within -tol)
///   X, Y > 0 (margin tol)
/// plus exact structural constraints: W graph-supported with unit row sums
/// (within 1e-10) and nonnegative entries, B block-diagonal exactly.
bool lmi_feasible(const Plant& p, const Matrix& X, const Matrix& Y, const Matrix& W,
                  const Matrix& B, double tol);

/// tr(Y_t X + X_t Y), the linearized complementarity objective.
double trace_objective(const Matrix& X, const Matrix& Y, const Matrix& Xt, const Matrix& Yt);

struct CclOptions {
    int max_outer = 500;
    int max_inner = 60;
    double lmi_tol = 1e-8;
    double trace_tol = 1e-6;  // stall threshold on the trace sequence
    int stall_window = 10;
    int random_starts = 20;
    std::uint64_t seed = 0;
    double rho_tol = 1e-9;  // success requires rho(Ahat) < 1 - rho_tol
    bool use_warm_starts = true;
    bool stop_on_trace = false;   // alternatively stop when s_t <= 2nN + trace_eps
    double trace_eps = 1e-3;
};

struct CclResult {
    enum class Status { converged, infeasible, max_iterations };
    Status status = Status::infeasible;
    std::optional<Design> design;  // present on success
    Matrix W, B, X, Y;             // best iterate either way
    std::vector<double> trace_sequence;  // s_t, non-increasing
    double final_rho = 0.0;
    int iterations = 0;
};

/// Cone complementarity linearization for rho(Ahat) < 1 over structured
/// (W, B). Feasible starts are tried in order: the scalar-gain optimum
/// (row projected onto the simplex), the norm-minimization design, then
/// seeded random draws. A start that is already stable returns at once
/// with X from the discrete Lyapunov equation and Y = X^-1, so the trace
/// objective sits at 2nN. Otherwise alternating projection onto the two
/// LMI cones with a least-squares pullback onto the (W, B) structure runs
/// under a non-increasing trace sequence until rho drops below 1, the
/// trace stalls (infeasible), or the iteration budget ends.
CclResult ccl_design(const Plant& p, const CclOptions& opts = {});

}  // namespace nettrack
