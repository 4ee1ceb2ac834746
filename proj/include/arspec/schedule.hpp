#ifndef ARSPEC_SCHEDULE_HPP
#define ARSPEC_SCHEDULE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace arspec {

// One structural change: the AR coefficient jumps by eps on the integer
// interval [k, k+h-1] (1-based time indices).
struct ChangeSegment {
    long k = 1;       // break point, >= 1
    long h = 1;       // length of change, >= 1
    double eps = 0.0; // magnitude of change, != 0

    long last() const { return k + h - 1; }
};

// Base AR(1) coefficient rho plus ordered disjoint change segments.
// segments.empty() encodes the null model.
class CoefficientSchedule {
public:
    CoefficientSchedule(double rho, std::vector<ChangeSegment> segments = {});

    double rho() const { return rho_; }
    const std::vector<ChangeSegment>& segments() const { return segments_; }
    std::size_t num_changes() const { return segments_.size(); }

    // rho_t: rho + eps_j when t lies in segment j, else rho.  t is 1-based.
    double coefficient_at(long t) const;

    // True when some segment makes |rho + eps_j| >= 1 (locally explosive).
    bool has_explosive_segment() const;

    // Largest index used by any segment (0 for the null model).
    long max_segment_index() const;

private:
    double rho_;
    std::vector<ChangeSegment> segments_;
};

// Time-varying innovation variance: sigma_t^2 = sigma2 + xi_j on segment j.
struct VarianceSegment {
    long k = 1;
    long h = 1;
    double xi = 0.0; // must satisfy xi > -sigma2
};

class VarianceSchedule {
public:
    VarianceSchedule(double sigma2, std::vector<VarianceSegment> segments = {});

    double sigma2() const { return sigma2_; }
    const std::vector<VarianceSegment>& segments() const { return segments_; }

    double variance_at(long t) const; // sigma_t^2, always > 0

private:
    double sigma2_;
    std::vector<VarianceSegment> segments_;
};

// B independent series of length n sharing one coefficient schedule.
struct PanelData {
    int B = 0;
    int n = 0;
    std::vector<double> series; // row-major, B x n

    double operator()(int j, int t) const { return series[static_cast<std::size_t>(j) * n + t]; }
    double& operator()(int j, int t) { return series[static_cast<std::size_t>(j) * n + t]; }
};

// y_t = rho_t y_{t-1} + z_t, y_0 = 0, z_t iid N(0, sigma2).
std::vector<double> simulate_path(const CoefficientSchedule& schedule, long n, double sigma2,
                                  std::uint64_t seed);

// Rows are independent substreams derived from seed; row j uses substream j.
PanelData simulate_panel(const CoefficientSchedule& schedule, int n, int B, double sigma2,
                         std::uint64_t seed);

// y_t = rho y_{t-1} + sigma_t z_t with time-varying noise level.
std::vector<double> simulate_hetero_path(double rho, const VarianceSchedule& vs, long n,
                                         std::uint64_t seed);

// { "rho": ..., "segments": [{"k","h","eps"}...], "sigma2": ... }
std::string schedule_to_json(const CoefficientSchedule& schedule, double sigma2);
CoefficientSchedule schedule_from_json(const std::string& text, double* sigma2_out = nullptr);

// CSV with header "j,t,y"; j and t are 1-based.
std::string panel_to_csv(const PanelData& panel);

} // namespace arspec

#endif
