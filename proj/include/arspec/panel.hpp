#ifndef ARSPEC_PANEL_HPP
#define ARSPEC_PANEL_HPP

#include <string>
#include <vector>

#include "arspec/dense.hpp"
#include "arspec/outliers.hpp"
#include "arspec/schedule.hpp"

namespace arspec {

struct EstimationConfig {
    enum class Mode { threshold, known_count };

    Mode mode = Mode::threshold;
    int count_left = 0;
    int count_right = 0;

    double lambda = -1.0;   // explicit constraint level; < 0 means use the auto rule
    double lambda_c = 0.4;  // auto rule: lambda = max(c * sqrt(log n / B) * (1 + n/B), 1.05/n)
    bool literal_min_symmetrization = false; // plain minimum instead of smaller magnitude

    static EstimationConfig known_count(int left, int right) {
        EstimationConfig cfg;
        cfg.mode = Mode::known_count;
        cfg.count_left = left;
        cfg.count_right = right;
        return cfg;
    }

    double resolve_lambda(int n, int B) const;
};

struct DetectionReport {
    double rho_hat = 0.0;
    OutlierSet outliers_hat;
    double hausdorff = 0.0;
    double mae = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

// Per-row mean-centered covariance: B^{-1} sum_j (y_j - mean_j)(y_j - mean_j)^T.
Matrix sample_covariance(const PanelData& panel);

// Constrained l1 precision estimator: column-by-column
// min ||w||_1 s.t. ||Sigma w - e_i||_inf <= lambda, then symmetrized.
// Default symmetrization keeps the smaller-magnitude entry; the literal
// minimum rule is available behind the config flag.
Matrix clime_estimate(const Matrix& sigma_hat, double lambda, bool literal_min = false);

// Pooled Yule-Walker estimate of rho, clipped into (-1, 1).
double yule_walker_rho(const PanelData& panel);

// Outliers of a dense symmetric precision estimate: either eigenvalues
// outside the estimated support, or the fixed smallest/largest counts.
OutlierSet estimate_outliers(const Matrix& omega_hat, double rho_hat,
                             const EstimationConfig& config);

// max of the two directed sup-inf distances.  Both sets empty -> 0; exactly
// one empty -> +infinity.
double hausdorff_distance(const std::vector<double>& X, const std::vector<double>& Y);

// (|est_L - truth_L| + |est_R - truth_R|) / 2
double mean_absolute_error(std::pair<double, double> est, std::pair<double, double> truth);

// Full pipeline on one panel: Yule-Walker, CLIME, outlier extraction, scoring
// against analytic truth when the true schedule is supplied.
DetectionReport detect_outliers(const PanelData& panel, const EstimationConfig& config,
                                const CoefficientSchedule* truth = nullptr);

} // namespace arspec

#endif
