#ifndef ARSPEC_OUTLIERS_HPP
#define ARSPEC_OUTLIERS_HPP

#include <string>
#include <vector>

#include "arspec/schedule.hpp"
#include "arspec/tridiagonal.hpp"

namespace arspec {

// Multisets of spectral outliers: left elements lie in (0, a_rho), right
// elements above b_rho.  Both are kept ascending.
struct OutlierSet {
    std::vector<double> left;
    std::vector<double> right;

    bool empty() const { return left.empty() && right.empty(); }
    std::size_t size() const { return left.size() + right.size(); }
};

struct BracketInterval {
    double lo, hi;
};

// Guaranteed outlier counts and bracketing intervals for an interval change of
// length h.
struct BracketReport {
    int p = 0; // guaranteed left outliers
    int q = 0; // guaranteed right outliers
    std::vector<BracketInterval> left_intervals;
    std::vector<BracketInterval> right_intervals;
    double upper_bound = 0.0; // bound on the largest eigenvalue
    std::string note;         // non-empty when numerically-colliding intervals were merged
};

struct BreakPointGuess {
    long k_from_min = 0; // argmax |entry| of the bottom eigenvector (1-based)
    long k_from_max = 0; // argmax |entry| of the top eigenvector (1-based)
    bool localized_min = false;
    bool localized_max = false; // false means "no localized spike"
};

// f(x) = 1 + rho^2 - rho (x + 1/x), mapping (-1,1)\{0} onto the complement of
// the support.
double f_transform(double rho, double x);

// Inverse of f on z outside [a_rho, b_rho]: the root of
// rho x^2 - (1 + rho^2 - z) x + rho = 0 with |x| < 1.
double f_inverse(double rho, double z);

// Closed-form outliers of the single SCM (h = 1).  Empty when
// |rho| >= |rho+eps|; otherwise exactly one left and one right outlier.
// Values scale by sigma2 when the innovation variance is not 1.
OutlierSet single_scm_outliers(double rho, double eps, double sigma2 = 1.0);

// det M_{h+1}(z), evaluated by the tridiagonal continuant recurrence.
double determinant_value(double rho, double eps, long h, double z);

// Guaranteed counts p, q and disjoint bracketing intervals; requires the
// outlier-producing regime |rho+eps| > |rho|.  Throws
// degenerate_configuration_error when some x_j hits a support endpoint.
BracketReport bracket_intervals(double rho, double eps, long h);

// All determinant roots inside the bracketing intervals (sign scan followed
// by bisection to tolerance tol).
OutlierSet interval_scm_outliers(double rho, double eps, long h, double tol = 1e-10);

// Multiset union of interval outliers over all segments.  Segments with
// |rho+eps_j| <= |rho| contribute nothing (warning to stderr).
OutlierSet general_scm_outliers(const CoefficientSchedule& schedule, double tol = 1e-10);

// Recover change magnitudes from (left, right) outlier pairs of h = 1
// submodels.  Pairing: left ascending against right descending.
std::vector<double> identify_magnitudes(double rho,
                                        const std::vector<std::pair<double, double>>& pairs);

// Eigenvector localization heuristic for the break point.
BreakPointGuess locate_break_heuristic(const SymTridiagonal& T);

// Diagnostic pair (m, (M - b_rho)/eps^2) for the large-eps limits.
std::pair<double, double> epsilon_limit_checks(double rho, double eps);

// { "rho":..., "left":[...], "right":[...], "brackets":{...}, "method":... }
std::string outlier_report_to_json(double rho, const OutlierSet& out, const BracketReport* brackets,
                                   const std::string& method);

} // namespace arspec

#endif
