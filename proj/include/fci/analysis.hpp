#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fci/errors.hpp"

namespace fci {

struct FitResult {
    Eigen::VectorXd params;
    Eigen::VectorXd sigma;  // 1-sigma estimates from the residual variance
    double residual_norm{0.0};
    int points_used{0};
};

/// Least-squares line S = a * L_y - gamma; params = (a, gamma).
FitResult fit_area_law(const std::vector<std::pair<double, double>>& points);

/// Nonlinear least squares for S = S_inf - b * chi^{-c}; points with
/// chi < chi_min are ignored.  params = (S_inf, b, c).
FitResult extrapolate_entropy(const std::vector<std::pair<double, double>>& points,
                              double chi_min = 200.0);

struct PlateauBounds {
    double mu_lo, mu_hi, width;
};

/// Maximal contiguous mu interval with |n - target| <= tol; the width is the
/// plateau-based gap estimate.  Points must be sorted by mu.
PlateauBounds plateau_bounds(const std::vector<std::pair<double, double>>& points,
                             double target_n, double tol);

struct EntropySample {
    double ly, chi, entropy;
};

struct TopologicalEntropy {
    double gamma;          // from the chi -> infinity extrapolation
    double gamma_chi_max;  // from the raw largest-chi entropies
    double slope;          // area-law coefficient a
};

/// Two-stage procedure: per-circumference extrapolation in bond dimension,
/// then an area-law fit across circumferences.  The error proxy refits the
/// area law with the raw values at the largest available bond dimension.
TopologicalEntropy two_stage_gamma(const std::vector<EntropySample>& samples,
                                   double chi_min = 200.0);

}  // namespace fci
