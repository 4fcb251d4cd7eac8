#pragma once

#include <vector>

#include "nettrack/graph.hpp"
#include "nettrack/matrix.hpp"

namespace nettrack {

/// The estimated system together with its sensing network:
/// state update x+ = A x + v, per-agent observations y_i = H_i x + r_i,
/// process noise covariance V, per-agent measurement covariances R_i.
/// Per-agent observation row counts p_i may differ; p_i >= 1.
struct Plant {
    Matrix A;                // n x n
    std::vector<Matrix> H;   // N entries, p_i x n
    Matrix V;                // n x n, symmetric PSD
    std::vector<Matrix> R;   // N entries, p_i x p_i, symmetric PSD
    Graph graph;

    int n() const { return A.rows; }
    int N() const { return graph.N; }
};

/// Checks dimensions and that V, R_i are symmetric PSD within 1e-10;
/// covariances are symmetrized in place to drop roundoff asymmetry.
void validate_plant(Plant& p);

/// n = N, H_i = e_i^T, V = I, R_i = [1], A = I. The observation form the
/// ring-topology spectrum results require.
Plant make_canonical_scalar(const Graph& g);

/// Scalar state, no observations (H_i = 0); isolates pure-consensus behavior.
Plant make_no_observation(const Graph& g);

/// Rescales A so that its spectral norm equals a.
void set_instability(Plant& p, double a);

/// a = ||A||_2.
double instability(const Plant& p);

/// Block-diagonal of neighborhood Grams: block i = sum_{j in N_i} H_j^T H_j
/// with N_i the closed neighborhood.
Matrix build_DH(const Plant& p);

/// Block-diagonal of the agents' own Grams H_i^T H_i (no neighbors).
Matrix build_DH_self(const Plant& p);

struct ObsGram {
    Matrix G;                              // sum over all agents of H_i^T H_i
    std::vector<Matrix> per_neighborhood;  // one Gram per closed neighborhood
};

ObsGram obs_gram(const Plant& p);

/// Rank of the stacked observability matrix [H; HA; ...; HA^(n-1)] equals n.
/// Rank is judged by singular values above 1e-9 of the largest.
bool collectively_observable(const Plant& p);

/// The total Gram G is invertible (numerically: lambda_min > 1e-9 lambda_max).
bool one_step_observable(const Plant& p);

/// Every neighborhood Gram is invertible. Implies one_step_observable,
/// which implies collectively_observable.
bool neighborhood_one_step_observable(const Plant& p);

}  // namespace nettrack
