#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nettrack/model.hpp"

namespace nettrack {

/// A consensus + innovation gain pair. W mixes neighbor estimates
/// (row-stochastic on the graph support); B is the block-diagonal
/// innovation gain, one n x n block per agent.
struct Design {
    enum class Kind { full, scalar };
    enum class Provenance { ntc_solver, scalar_closed_form, lmi_ccl, local_interval, user };

    Kind kind = Kind::full;
    Matrix W;  // N x N
    Matrix B;  // nN x nN, block-diagonal
    std::optional<double> alpha;
    Provenance provenance = Provenance::user;
};

/// W = I - alpha L, B = alpha I. The scalar-gain family.
Design make_scalar_design(const Plant& p, double alpha,
                          Design::Provenance prov = Design::Provenance::scalar_closed_form);

/// Checks a design against a plant: W row-stochastic within 1e-10 and
/// supported on closed neighborhoods, B block-diagonal with n x n blocks.
void validate_design(const Plant& p, const Design& d);

/// Closed-form error process e+ = P e + u:
///   P     = (I_N (x) A)(W (x) I_n - B D_H)
///   Sigma = Phi + 11^T (x) V  with  Phi = (I (x) A) B (Acal (x) I_n) Rbar (Acal (x) I_n)^T B^T (I (x) A)^T
///   Rbar  = blockdiag(H_i^T R_i H_i),  Acal = Adj + I
struct ErrorDynamics {
    Matrix P;
    Matrix Sigma;
    Matrix Phi;
    Matrix Rbar;
    Matrix Acal;
};

ErrorDynamics error_dynamics(const Plant& p, const Design& d);

/// One estimator step for every agent:
///   xhat_i+ = A (sum_j w_ij xhat_j + B_i sum_{j in N_i} H_j^T (y_j - H_j xhat_i))
/// Exactly one neighbor exchange per plant step.
std::vector<Vec> step_estimates(const Plant& p, const Design& d, const std::vector<Vec>& xhat,
                                const std::vector<Vec>& y);

struct SimOptions {
    int steps = 1000;
    int trials = 100;
    std::uint64_t seed = 42;
    bool allow_unstable = false;
    int threads = 0;  // 0: hardware count, capped by the NETTRACK_THREADS env var
};

/// Monte Carlo output. Statistics tagged "steady-state" are averaged over
/// the last 20% of steps. Results are a pure function of (plant, design,
/// steps, trials, seed): trials draw from independent counter-derived
/// streams and all reductions run in fixed trial order, so the thread
/// count never changes a single bit of the output.
struct SimulationResult {
    int trials = 0;
    int steps = 0;
    std::uint64_t seed = 0;
    std::vector<double> empirical_mean_error;  // per step: || mean over trials of e_k ||_2
    double empirical_cov_norm = 0.0;           // ||S||_2 of the steady-state window covariance
    double cov_norm_stderr = 0.0;              // MC standard error of the same, via top-eigvec projection
    std::vector<double> per_agent_mse;         // steady-state window, per agent
    Vec final_mean;                            // mean error vector at the last step
    double final_std = 0.0;                    // sqrt of total variance at the last step
    bool diverged = false;
    int diverged_step = -1;
};

/// Propagates the error process e+ = P e + u directly (u rebuilt from raw
/// noise draws each step), which stays finite even when A itself is
/// unstable. Requires ||P||_2 < 1 unless allow_unstable is set.
SimulationResult simulate(const Plant& p, const Design& d, const SimOptions& opts);

/// S solving S = P S P^T + Sigma; residual within 1e-8.
Matrix exact_steady_covariance(const ErrorDynamics& ed);

}  // namespace nettrack
