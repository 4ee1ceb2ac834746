#include "arspec/schedule.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "arspec/rng.hpp"

namespace arspec {

CoefficientSchedule::CoefficientSchedule(double rho, std::vector<ChangeSegment> segments)
    : rho_(rho), segments_(std::move(segments)) {
    if (!(std::abs(rho) < 1.0) || rho == 0.0)
        throw std::invalid_argument("CoefficientSchedule: rho must satisfy 0 < |rho| < 1");
    long prev_end = 0;
    for (const auto& s : segments_) {
        if (s.k < 1) throw std::invalid_argument("ChangeSegment: k must be >= 1");
        if (s.h < 1) throw std::invalid_argument("ChangeSegment: h must be >= 1");
        if (s.eps == 0.0) throw std::invalid_argument("ChangeSegment: eps must be nonzero");
        if (s.k <= prev_end)
            throw std::invalid_argument("CoefficientSchedule: segments must be disjoint and increasing");
        prev_end = s.last();
    }
    if (has_explosive_segment())
        std::cerr << "[arspec] warning: a segment has |rho+eps| >= 1; "
                     "the process is locally explosive within that segment\n";
}

double CoefficientSchedule::coefficient_at(long t) const {
    if (t < 1) throw std::invalid_argument("coefficient_at: t must be >= 1");
    for (const auto& s : segments_) {
        if (t < s.k) break;
        if (t <= s.last()) return rho_ + s.eps;
    }
    return rho_;
}

bool CoefficientSchedule::has_explosive_segment() const {
    for (const auto& s : segments_)
        if (std::abs(rho_ + s.eps) >= 1.0) return true;
    return false;
}

long CoefficientSchedule::max_segment_index() const {
    return segments_.empty() ? 0 : segments_.back().last();
}

VarianceSchedule::VarianceSchedule(double sigma2, std::vector<VarianceSegment> segments)
    : sigma2_(sigma2), segments_(std::move(segments)) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("VarianceSchedule: sigma2 must be > 0");
    long prev_end = 0;
    for (const auto& s : segments_) {
        if (s.k < 1 || s.h < 1) throw std::invalid_argument("VarianceSegment: k,h must be >= 1");
        if (s.xi == 0.0) throw std::invalid_argument("VarianceSegment: xi must be nonzero");
        if (!(s.xi > -sigma2))
            throw std::invalid_argument("VarianceSchedule: xi must exceed -sigma2 (variance > 0)");
        if (s.k <= prev_end)
            throw std::invalid_argument("VarianceSchedule: segments must be disjoint and increasing");
        prev_end = s.k + s.h - 1;
    }
}

double VarianceSchedule::variance_at(long t) const {
    if (t < 1) throw std::invalid_argument("variance_at: t must be >= 1");
    for (const auto& s : segments_) {
        if (t < s.k) break;
        if (t <= s.k + s.h - 1) return sigma2_ + s.xi;
    }
    return sigma2_;
}

std::vector<double> simulate_path(const CoefficientSchedule& schedule, long n, double sigma2,
                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate_path: n must be >= 1");
    if (sigma2 < 0.0) throw std::invalid_argument("simulate_path: sigma2 must be >= 0");
    GaussianRng rng(seed);
    const double sd = std::sqrt(sigma2);
    std::vector<double> y(static_cast<std::size_t>(n));
    double prev = 0.0; // y_0 = 0
    for (long t = 1; t <= n; ++t) {
        prev = schedule.coefficient_at(t) * prev + sd * rng.normal();
        y[static_cast<std::size_t>(t - 1)] = prev;
    }
    return y;
}

PanelData simulate_panel(const CoefficientSchedule& schedule, int n, int B, double sigma2,
                         std::uint64_t seed) {
    if (B < 1) throw std::invalid_argument("simulate_panel: B must be >= 1");
    if (n < 2) throw std::invalid_argument("simulate_panel: n must be >= 2");
    PanelData panel;
    panel.B = B;
    panel.n = n;
    panel.series.resize(static_cast<std::size_t>(B) * n);
    for (int j = 0; j < B; ++j) {
        auto row = simulate_path(schedule, n, sigma2, substream_seed(seed, static_cast<std::uint64_t>(j)));
        std::copy(row.begin(), row.end(), panel.series.begin() + static_cast<std::size_t>(j) * n);
    }
    return panel;
}

std::vector<double> simulate_hetero_path(double rho, const VarianceSchedule& vs, long n,
                                         std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate_hetero_path: n must be >= 1");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("simulate_hetero_path: |rho| must be < 1");
    GaussianRng rng(seed);
    std::vector<double> y(static_cast<std::size_t>(n));
    double prev = 0.0;
    for (long t = 1; t <= n; ++t) {
        prev = rho * prev + std::sqrt(vs.variance_at(t)) * rng.normal();
        y[static_cast<std::size_t>(t - 1)] = prev;
    }
    return y;
}

std::string schedule_to_json(const CoefficientSchedule& schedule, double sigma2) {
    nlohmann::json j;
    j["rho"] = schedule.rho();
    j["sigma2"] = sigma2;
    j["segments"] = nlohmann::json::array();
    for (const auto& s : schedule.segments())
        j["segments"].push_back({{"k", s.k}, {"h", s.h}, {"eps", s.eps}});
    return j.dump(2);
}

CoefficientSchedule schedule_from_json(const std::string& text, double* sigma2_out) {
    const auto j = nlohmann::json::parse(text);
    std::vector<ChangeSegment> segments;
    if (j.contains("segments"))
        for (const auto& s : j["segments"])
            segments.push_back({s.at("k").get<long>(), s.value("h", 1L), s.at("eps").get<double>()});
    if (sigma2_out) *sigma2_out = j.value("sigma2", 1.0);
    return CoefficientSchedule(j.at("rho").get<double>(), std::move(segments));
}

std::string panel_to_csv(const PanelData& panel) {
    std::ostringstream out;
    out.precision(17);
    out << "j,t,y\n";
    for (int j = 0; j < panel.B; ++j)
        for (int t = 0; t < panel.n; ++t)
            out << (j + 1) << ',' << (t + 1) << ',' << panel(j, t) << '\n';
    return out.str();
}

} // namespace arspec
