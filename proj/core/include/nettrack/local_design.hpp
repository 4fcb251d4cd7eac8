#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nettrack/model.hpp"

namespace nettrack {

/// Rank-one perturbation lower bound:
///   tau = (lambda2 + ||z||^2 - sqrt((lambda2 + ||z||^2)^2 - 4 lambda2 z1^2)) / 2
/// where z1 is the component of z along the normalized all-ones vector.
/// The discriminant is provably nonnegative and clamped at 0 for roundoff.
/// tau = 0 whenever lambda2 = 0 (disconnected graph).
double ipsen_lower_bound(double lambda2, const Vec& z, double z1_component);

/// For symmetric PSD A1, B1 returns (lambda_min(A1), lambda_max(A1) + lambda_max(B1)),
/// which bracket the spectrum of A1 + B1. Throws NotPSD.
std::pair<double, double> weyl_bounds(const Matrix& A1, const Matrix& B1);

/// For a circulant plant in canonical scalar form (n = N, H_i = e_i^T),
/// checks that the spectrum of L (x) I_n + blockdiag(H_i^T H_i) equals the
/// spectrum of I_n (x) (L + H_1^T H_1) within 1e-8 elementwise after sorting.
/// Throws ModelMismatch when the plant is not of that form.
bool circulant_spectrum_equivalence(const Plant& p);

/// Which locally computable bound produced the report:
/// circulant_isomorphic uses lambda_2 of the full Laplacian; cycle_subgraph
/// uses lambda_2 of a supplied Hamiltonian cycle's Laplacian.
struct LocalBoundReport {
    double tau = 0.0;
    double lambda_max_bound = 0.0;  // lambda_max(D_H) + lambda_max(L), >= lambda_max(Q)
    std::optional<std::pair<double, double>> interval;
    double C_loc = 1.0;
    enum class Method { circulant_isomorphic, cycle_subgraph } method = Method::circulant_isomorphic;
    double lambda2_used = 0.0;  // the lambda_2 fed into tau, for auditability
    double a = 1.0;
};

/// Local stability window ((a-1)/(a tau), (a+1)/(a lambda_max_bound)),
/// empty when a >= C_loc = (S + tau)/(S - tau) with S = lambda_max_bound.
/// Requires the canonical scalar observation form plus either a circulant
/// (or circulant-isomorphic, N <= 10) graph, or a supplied Hamiltonian
/// cycle with the leftover Laplacian part PSD (always true for Laplacians;
/// verified). Throws NotApplicable when no structure qualifies.
LocalBoundReport local_alpha_interval(const Plant& p, double a,
                                      const std::optional<std::vector<int>>& cycle_order = {});

}  // namespace nettrack
