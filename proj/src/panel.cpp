#include "arspec/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "arspec/errors.hpp"
#include "arspec/simplex.hpp"
#include "arspec/spectral.hpp"

namespace arspec {

double EstimationConfig::resolve_lambda(int n, int B) const {
    if (lambda > 0.0) return lambda;
    // Small-sample correction (1 + n/B) sharpens the constraint when B is not
    // large relative to n.  The floor keeps the column programs feasible: the
    // per-row centering gives the sample covariance an exact null vector of
    // ones, so any bound below 1/n is unattainable.
    const double base = lambda_c * std::sqrt(std::log(static_cast<double>(n)) / B);
    return std::max(base * (1.0 + static_cast<double>(n) / B), 1.05 / n);
}

Matrix sample_covariance(const PanelData& panel) {
    if (panel.B < 2) throw std::invalid_argument("sample_covariance: B must be >= 2");
    const int n = panel.n, B = panel.B;
    Matrix S(n, n);
    std::vector<double> centered(n);
    for (int j = 0; j < B; ++j) {
        double mean = 0.0;
        for (int t = 0; t < n; ++t) mean += panel(j, t);
        mean /= n;
        for (int t = 0; t < n; ++t) centered[t] = panel(j, t) - mean;
        for (int r = 0; r < n; ++r) {
            const double cr = centered[r];
            for (int c = r; c < n; ++c) S(r, c) += cr * centered[c];
        }
    }
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            S(r, c) /= B;
            S(c, r) = S(r, c);
        }
    return S;
}

Matrix clime_estimate(const Matrix& sigma_hat, double lambda, bool literal_min) {
    if (!sigma_hat.is_symmetric(1e-8))
        throw std::invalid_argument("clime_estimate: sigma_hat must be symmetric");
    if (!(lambda > 0.0)) throw std::invalid_argument("clime_estimate: lambda must be > 0");
    const int n = sigma_hat.rows();

    // Column LP after the split w = u - v, u,v >= 0:
    //   minimize sum(u) + sum(v)
    //   Sigma(u - v) <= e_i + lambda,  -Sigma(u - v) <= lambda - e_i.
    Matrix A(2 * n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int cidx = 0; cidx < n; ++cidx) {
            const double v = sigma_hat(r, cidx);
            A(r, cidx) = v;
            A(r, n + cidx) = -v;
            A(n + r, cidx) = -v;
            A(n + r, n + cidx) = v;
        }
    const std::vector<double> cost(2 * n, 1.0);

    Matrix omega(n, n);
    std::vector<double> b(2 * n);
    for (int col = 0; col < n; ++col) {
        for (int r = 0; r < n; ++r) {
            const double e = r == col ? 1.0 : 0.0;
            b[r] = lambda + e;
            b[n + r] = lambda - e;
        }
        const SimplexResult res = solve_inequality_lp(A, b, cost);
        if (!res.feasible)
            throw estimation_failure("clime_estimate: column LP infeasible (lambda too small)", col);
        for (int r = 0; r < n; ++r) omega(r, col) = res.x[r] - res.x[n + r];
    }

    // symmetrize
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double a = omega(i, j), c = omega(j, i);
            const double v = literal_min ? std::min(a, c)
                                         : (std::abs(a) <= std::abs(c) ? a : c);
            omega(i, j) = v;
            omega(j, i) = v;
        }
    return omega;
}

double yule_walker_rho(const PanelData& panel) {
    if (static_cast<long>(panel.B) * panel.n < 10)
        throw std::invalid_argument("yule_walker_rho: B*n must be >= 10");
    double num = 0.0, den = 0.0;
    for (int j = 0; j < panel.B; ++j)
        for (int t = 1; t < panel.n; ++t) {
            num += panel(j, t) * panel(j, t - 1);
            den += panel(j, t - 1) * panel(j, t - 1);
        }
    if (den == 0.0) throw estimation_failure("yule_walker_rho: zero denominator", -1);
    const double clip = 1.0 - 1e-6;
    return std::clamp(num / den, -clip, clip);
}

OutlierSet estimate_outliers(const Matrix& omega_hat, double rho_hat,
                             const EstimationConfig& config) {
    if (!omega_hat.is_symmetric(1e-8))
        throw std::invalid_argument("estimate_outliers: omega_hat must be symmetric");
    const SymTridiagonal T = tridiagonalize(omega_hat);
    const Spectrum spec = eigenvalues_symtridiag(T, 1e-12);
    const auto& ev = spec.eigenvalues;
    OutlierSet out;
    if (config.mode == EstimationConfig::Mode::known_count) {
        const int n = static_cast<int>(ev.size());
        const int cl = std::min(config.count_left, n);
        const int cr = std::min(config.count_right, n);
        out.left.assign(ev.begin(), ev.begin() + cl);
        out.right.assign(ev.end() - cr, ev.end());
    } else {
        const auto [a, b] = support_bounds(rho_hat);
        for (double v : ev) {
            if (v < a) out.left.push_back(v);
            if (v > b) out.right.push_back(v);
        }
    }
    return out;
}

double hausdorff_distance(const std::vector<double>& X, const std::vector<double>& Y) {
    if (X.empty() && Y.empty()) return 0.0;
    if (X.empty() || Y.empty()) return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : to) best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(X, Y), directed(Y, X));
}

double mean_absolute_error(std::pair<double, double> est, std::pair<double, double> truth) {
    return 0.5 * (std::abs(est.first - truth.first) + std::abs(est.second - truth.second));
}

DetectionReport detect_outliers(const PanelData& panel, const EstimationConfig& config,
                                const CoefficientSchedule* truth) {
    DetectionReport report;
    report.rho_hat = yule_walker_rho(panel);
    report.lambda = config.resolve_lambda(panel.n, panel.B);
    const Matrix sigma = sample_covariance(panel);
    const Matrix omega = clime_estimate(sigma, report.lambda, config.literal_min_symmetrization);
    report.outliers_hat = estimate_outliers(omega, report.rho_hat, config);
    if (truth) {
        const OutlierSet truth_out = general_scm_outliers(*truth);
        std::vector<double> est_all = report.outliers_hat.left;
        est_all.insert(est_all.end(), report.outliers_hat.right.begin(),
                       report.outliers_hat.right.end());
        std::vector<double> truth_all = truth_out.left;
        truth_all.insert(truth_all.end(), truth_out.right.begin(), truth_out.right.end());
        report.hausdorff = hausdorff_distance(est_all, truth_all);
        if (!report.outliers_hat.left.empty() && !report.outliers_hat.right.empty() &&
            !truth_out.left.empty() && !truth_out.right.empty()) {
            report.mae = mean_absolute_error(
                {report.outliers_hat.left.front(), report.outliers_hat.right.back()},
                {truth_out.left.front(), truth_out.right.back()});
        }
    }
    return report;
}

std::string DetectionReport::to_json() const {
    nlohmann::json j;
    j["rho_hat"] = rho_hat;
    j["outliers"]["left"] = outliers_hat.left;
    j["outliers"]["right"] = outliers_hat.right;
    j["hausdorff"] = hausdorff;
    j["mae"] = mae;
    j["lambda"] = lambda;
    j["seed"] = seed;
    return j.dump(2);
}

} // namespace arspec
