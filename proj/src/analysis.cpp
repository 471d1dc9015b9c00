#include "fci/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("analysis", code, msg);
}

}  // namespace

FitResult fit_area_law(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs;
    for (const auto& [x, y] : points)
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    if (xs.size() < 2) fail("Underdetermined", "need at least two distinct L_y values");

    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = points[i].first;
        X(i, 1) = -1.0;
        y(i) = points[i].second;
    }
    const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    const Eigen::VectorXd resid = y - X * beta;
    FitResult out;
    out.params = beta;  // (a, gamma)
    out.points_used = n;
    out.residual_norm = resid.norm();
    const int dof = std::max(1, n - 2);
    const double var = resid.squaredNorm() / dof;
    const Eigen::MatrixXd cov = var * (X.transpose() * X).inverse();
    out.sigma = cov.diagonal().cwiseSqrt();
    return out;
}

FitResult extrapolate_entropy(const std::vector<std::pair<double, double>>& points,
                              double chi_min) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : points)
        if (p.first >= chi_min) pts.push_back(p);
    if (pts.size() < 3)
        fail("Underdetermined", "need at least three points with chi >= chi_min");
    std::sort(pts.begin(), pts.end());

    // deterministic start: S_inf at the top of the data, c = 1, b from the
    // first point
    double s_inf = 0.0;
    for (const auto& p : pts) s_inf = std::max(s_inf, p.second);
    double c = 1.0;
    double b = (s_inf - pts.front().second) * pts.front().first;

    const int n = static_cast<int>(pts.size());
    auto model = [](double chi, double si, double bb, double cc) {
        return si - bb * std::pow(chi, -cc);
    };
    Eigen::VectorXd r(n);
    auto residuals = [&](double si, double bb, double cc) {
        for (int i = 0; i < n; ++i)
            r(i) = pts[i].second - model(pts[i].first, si, bb, cc);
        return r.squaredNorm();
    };

    // Levenberg-Marquardt with the analytic Jacobian
    double lambda = 1e-3;
    double chi2 = residuals(s_inf, b, c);
    Eigen::MatrixXd J(n, 3);
    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        for (int i = 0; i < n; ++i) {
            const double p = std::pow(pts[i].first, -c);
            J(i, 0) = 1.0;
            J(i, 1) = -p;
            J(i, 2) = b * std::log(pts[i].first) * p;
        }
        residuals(s_inf, b, c);
        const Eigen::MatrixXd jtj = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        bool stepped = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd A = jtj;
            for (int dgn = 0; dgn < 3; ++dgn) A(dgn, dgn) += lambda * (jtj(dgn, dgn) + 1e-12);
            const Eigen::VectorXd step = A.ldlt().solve(g);
            const double s2 = s_inf + step(0), b2 = b + step(1), c2 = c + step(2);
            const double chi2_new = residuals(s2, b2, c2);
            if (std::isfinite(chi2_new) && chi2_new <= chi2) {
                if (chi2 - chi2_new < 1e-15 * (1.0 + chi2) && step.norm() < 1e-12)
                    converged = true;
                s_inf = s2;
                b = b2;
                c = c2;
                chi2 = chi2_new;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 3.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) converged = true;  // stationary within numerics
    }
    if (!std::isfinite(chi2)) fail("NoConvergence", "entropy extrapolation diverged");

    residuals(s_inf, b, c);
    FitResult out;
    out.params = Eigen::Vector3d(s_inf, b, c);
    out.points_used = n;
    out.residual_norm = r.norm();
    const int dof = std::max(1, n - 3);
    const double var = r.squaredNorm() / dof;
    for (int i = 0; i < n; ++i) {
        const double p = std::pow(pts[i].first, -c);
        J(i, 0) = 1.0;
        J(i, 1) = -p;
        J(i, 2) = b * std::log(pts[i].first) * p;
    }
    Eigen::MatrixXd jtj = J.transpose() * J;
    jtj += 1e-12 * Eigen::MatrixXd::Identity(3, 3);
    out.sigma = (var * jtj.inverse()).diagonal().cwiseAbs().cwiseSqrt();
    return out;
}

PlateauBounds plateau_bounds(const std::vector<std::pair<double, double>>& points,
                             double target_n, double tol) {
    if (points.empty()) fail("NoPlateau", "no data points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first < points[i - 1].first)
            fail("BadRequest", "points must be sorted by mu");
    double best_lo = 0.0, best_hi = 0.0, best_w = -1.0;
    std::size_t i = 0;
    while (i < points.size()) {
        if (std::abs(points[i].second - target_n) > tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < points.size() && std::abs(points[j + 1].second - target_n) <= tol)
            ++j;
        const double w = points[j].first - points[i].first;
        if (w > best_w) {
            best_w = w;
            best_lo = points[i].first;
            best_hi = points[j].first;
        }
        i = j + 1;
    }
    if (best_w < 0.0)
        fail("NoPlateau", "no point within tolerance of the target density");
    return {best_lo, best_hi, best_w};
}

TopologicalEntropy two_stage_gamma(const std::vector<EntropySample>& samples,
                                   double chi_min) {
    std::map<double, std::vector<std::pair<double, double>>> by_ly;
    for (const auto& s : samples) by_ly[s.ly].emplace_back(s.chi, s.entropy);
    if (by_ly.size() < 2) fail("Underdetermined", "need at least two circumferences");

    std::vector<std::pair<double, double>> extrapolated, at_chi_max;
    for (auto& [ly, pts] : by_ly) {
        const auto fit = extrapolate_entropy(pts, chi_min);
        extrapolated.emplace_back(ly, fit.params(0));
        const auto peak = *std::max_element(
            pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
        at_chi_max.emplace_back(ly, peak.second);
    }
    const auto area = fit_area_law(extrapolated);
    const auto area_raw = fit_area_law(at_chi_max);
    return {area.params(1), area_raw.params(1), area.params(0)};
}

}  // namespace fci
