#pragma once

#include <optional>
#include <utility>

#include "nettrack/estimator.hpp"
#include "nettrack/model.hpp"

namespace nettrack {

/// Everything the scalar-gain closed forms produce for one plant.
/// With Q = L (x) I_n + D_H and eigenvalues lambda_min = l1, lambda_max = lm:
///   C_alpha   = (lm + l1)/(lm - l1)   (1 when l1 = 0; infinite when lm = l1)
///   alpha_opt = 2/(lm + l1)
///   min_norm  = (lm - l1)/(lm + l1) = min over alpha of ||I - alpha Q||_2
/// interval is the open stability window (alpha_0, alpha_1) for a given a,
/// present only when a < C_alpha.
struct ScalarGainReport {
    Matrix Q;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double C_alpha = 1.0;
    bool capacity_infinite = false;
    double alpha_opt = 0.0;
    double min_norm = 1.0;
    std::optional<double> a;
    std::optional<std::pair<double, double>> interval;
};

/// Q = L (x) I_n + D_H; symmetric PSD.
Matrix build_Q(const Plant& p);

/// Closed forms only; no stability window (no a supplied).
ScalarGainReport scalar_capacity(const Plant& p);

/// Same report with the stability window for instability a attached.
ScalarGainReport scalar_report(const Plant& p, double a);

/// Open interval ((a-1)/(a l1), (a+1)/(a lm)) when a < C_alpha, else empty.
/// The left endpoint is clamped at 0 when a <= 1 (alpha must be >= 0).
std::optional<std::pair<double, double>> alpha_interval(const Plant& p, double a);

/// (1/l1 - 1/lm)(C_alpha/a - 1); equals alpha_1 - alpha_0.
/// Throws CapacityExceeded when a >= C_alpha.
double interval_length(const Plant& p, double a);

/// Per-agent steady-state bound for the scalar design with gain alpha:
///   (||V||_2 + alpha^2 a^2 N ||Rbar||_2) / (1 - a^2 ||I - alpha Q||_2^2)
/// Throws Unstable when a ||I - alpha Q||_2 >= 1.
double scalar_performance_bound(const Plant& p, double alpha);

}  // namespace nettrack
