#include "arspec/outliers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "arspec/errors.hpp"
#include "arspec/spectral.hpp"

namespace arspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rho(double rho) {
    if (!(std::abs(rho) < 1.0) || rho == 0.0)
        throw std::invalid_argument("outlier solver: 0 < |rho| < 1 required");
}

} // namespace

double f_transform(double rho, double x) {
    check_rho(rho);
    if (x == 0.0 || std::abs(x) >= 1.0)
        throw std::domain_error("f_transform: 0 < |x| < 1 required");
    return 1.0 + rho * rho - rho * (x + 1.0 / x);
}

double f_inverse(double rho, double z) {
    check_rho(rho);
    const SpectralLaw law(rho);
    if (z >= law.a && z <= law.b)
        throw std::domain_error("f_inverse: z inside the support");
    // rho x^2 - (1 + rho^2 - z) x + rho = 0; the two roots multiply to 1,
    // return the interior one.
    const double bq = 1.0 + rho * rho - z;
    const double disc = bq * bq - 4.0 * rho * rho;
    if (disc < 0.0) throw numerical_error("f_inverse: negative discriminant");
    const double sq = std::sqrt(disc);
    // numerically stable: compute the larger-magnitude root first
    const double r1 = (bq >= 0.0) ? (bq + sq) / (2.0 * rho) : (bq - sq) / (2.0 * rho);
    const double r2 = 1.0 / r1; // product of roots is 1
    return std::abs(r1) < 1.0 ? r1 : r2;
}

OutlierSet single_scm_outliers(double rho, double eps, double sigma2) {
    check_rho(rho);
    if (eps == 0.0) throw std::invalid_argument("single_scm_outliers: eps must be nonzero");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("single_scm_outliers: sigma2 must be > 0");
    OutlierSet out;
    if (std::abs(rho) >= std::abs(rho + eps)) return out; // dichotomy: no outliers
    const double re = rho + eps;
    const double num = rho * eps * (eps + 2.0 * rho);
    const double sq = std::sqrt(num * num + 4.0 * rho * rho * re * re);
    const double s = (num - sq) / (2.0 * re * re);
    const double t = (num + sq) / (2.0 * re * re);
    auto fval = [rho](double x) { return 1.0 + rho * rho - rho * (x + 1.0 / x); };
    double m, M;
    if (rho > 0.0) {
        m = fval(t);
        M = fval(s);
    } else {
        m = fval(s);
        M = fval(t);
    }
    // The precision matrix carries a 1/sigma2 factor, so its outliers do too.
    out.left.push_back(m / sigma2);
    out.right.push_back(M / sigma2);
    return out;
}

double determinant_value(double rho, double eps, long h, double z) {
    check_rho(rho);
    if (h < 1) throw std::invalid_argument("determinant_value: h must be >= 1");
    if (rho + eps == 0.0)
        throw numerical_error("determinant_value: rho + eps = 0 is a singular parameter");
    const double x = f_inverse(rho, z);
    const double re = rho + eps;
    const double e2r = eps * (eps + 2.0 * rho);
    const double alpha = (rho / x + e2r) / re;
    const double beta = (rho * (x + 1.0 / x) + e2r) / re;
    const double gamma = (rho / x) / re;
    // continuant recurrence on the (h+1)x(h+1) matrix with unit off-diagonals
    double dm2 = 1.0;   // det of empty minor
    double dm1 = alpha; // leading 1x1 minor
    for (long i = 2; i <= h; ++i) {
        const double d = beta * dm1 - dm2;
        dm2 = dm1;
        dm1 = d;
    }
    return gamma * dm1 - dm2;
}

BracketReport bracket_intervals(double rho, double eps, long h) {
    check_rho(rho);
    if (h < 1) throw std::invalid_argument("bracket_intervals: h must be >= 1");
    if (!(std::abs(rho + eps) > std::abs(rho)))
        throw std::invalid_argument("bracket_intervals: requires |rho+eps| > |rho|");
    const SpectralLaw law(rho);
    const double re = rho + eps;

    // x_j for j = 0..h with the +-infinity sentinels
    std::vector<double> x(static_cast<std::size_t>(h) + 1);
    x[0] = rho > 0.0 ? -kInf : kInf;
    x[static_cast<std::size_t>(h)] = rho > 0.0 ? kInf : -kInf;
    for (long j = 1; j < h; ++j)
        x[static_cast<std::size_t>(j)] =
            1.0 + re * re - 2.0 * re * std::cos(j * M_PI / static_cast<double>(h));

    const double endpoint_tol = 1e-12 * std::max(1.0, law.b);
    for (long j = 1; j < h; ++j) {
        const double v = x[static_cast<std::size_t>(j)];
        if (std::abs(v - law.a) < endpoint_tol || std::abs(v - law.b) < endpoint_tol)
            throw degenerate_configuration_error(
                "bracket_intervals: x_j coincides with a support endpoint; perturb eps and retry");
    }

    BracketReport rep;
    for (long j = 0; j <= h; ++j) {
        const double v = x[static_cast<std::size_t>(j)];
        if (v < law.a) ++rep.p;
        if (v > law.b) ++rep.q;
    }
    rep.upper_bound =
        law.b + std::sqrt(static_cast<double>(h)) * std::abs(eps) *
                    std::sqrt((eps + 2.0 * rho) * (eps + 2.0 * rho) + 2.0);

    auto xi = [&](long j) { return x[static_cast<std::size_t>(j)]; };
    for (int j = 1; j <= rep.p; ++j) {
        double lo, hi;
        if (rho > 0.0) {
            lo = std::max(xi(j - 1), 0.0);
            hi = std::min(xi(j), law.a);
        } else {
            lo = std::max(xi(h + 1 - j), 0.0);
            hi = std::min(xi(h - j), law.a);
        }
        rep.left_intervals.push_back({lo, hi});
    }
    for (int l = 1; l <= rep.q; ++l) {
        double lo, hi;
        if (rho > 0.0) {
            lo = std::max(law.b, xi(h - l));
            hi = std::min(xi(h + 1 - l), rep.upper_bound);
        } else {
            lo = std::max(law.b, xi(l));
            hi = std::min(xi(l - 1), rep.upper_bound);
        }
        rep.right_intervals.push_back({lo, hi});
    }
    std::sort(rep.left_intervals.begin(), rep.left_intervals.end(),
              [](const BracketInterval& a, const BracketInterval& b) { return a.lo < b.lo; });
    std::sort(rep.right_intervals.begin(), rep.right_intervals.end(),
              [](const BracketInterval& a, const BracketInterval& b) { return a.lo < b.lo; });

    // merge numerically colliding intervals (consecutive x_j closer than tol)
    auto merge_close = [&rep](std::vector<BracketInterval>& iv) {
        const double tol = 1e-12;
        for (std::size_t i = 0; i + 1 < iv.size();) {
            if (iv[i + 1].lo - iv[i].hi < tol && iv[i + 1].lo <= iv[i].hi + tol &&
                iv[i].hi >= iv[i + 1].lo - tol && (iv[i].hi - iv[i].lo < tol || iv[i + 1].hi - iv[i + 1].lo < tol)) {
                iv[i].hi = iv[i + 1].hi;
                iv.erase(iv.begin() + static_cast<long>(i) + 1);
                rep.note = "merged numerically colliding bracketing intervals";
            } else {
                ++i;
            }
        }
    };
    merge_close(rep.left_intervals);
    merge_close(rep.right_intervals);
    return rep;
}

namespace {

// Sign scan + bisection for roots of g inside (lo, hi).
std::vector<double> scan_roots(const std::function<double(double)>& g, double lo, double hi,
                               double tol, int panels) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    const double shrink = 1e-9 * std::max(1.0, hi - lo);
    lo += shrink;
    hi -= shrink;
    if (!(hi > lo)) return roots;
    double prev_x = lo;
    double prev_v = g(lo);
    for (int i = 1; i <= panels; ++i) {
        const double xx = lo + (hi - lo) * i / panels;
        const double vv = g(xx);
        if (prev_v == 0.0) {
            roots.push_back(prev_x);
        } else if (vv != 0.0 && std::signbit(prev_v) != std::signbit(vv)) {
            double a = prev_x, b = xx, fa = prev_v;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                const double fm = g(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fa) != std::signbit(fm)) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = xx;
        prev_v = vv;
    }
    return roots;
}

} // namespace

OutlierSet interval_scm_outliers(double rho, double eps, long h, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("interval_scm_outliers: tol must be > 0");
    const BracketReport rep = bracket_intervals(rho, eps, h);
    auto det = [rho, eps, h](double z) { return determinant_value(rho, eps, h, z); };
    OutlierSet out;
    const int panels = 512;
    for (const auto& iv : rep.left_intervals) {
        auto roots = scan_roots(det, std::max(iv.lo, 0.0), iv.hi, tol, panels);
        if (roots.empty())
            throw numerical_error(
                "interval_scm_outliers: no root in a guaranteed left bracketing interval");
        out.left.insert(out.left.end(), roots.begin(), roots.end());
    }
    for (const auto& iv : rep.right_intervals) {
        auto roots = scan_roots(det, iv.lo, iv.hi, tol, panels);
        if (roots.empty())
            throw numerical_error(
                "interval_scm_outliers: no root in a guaranteed right bracketing interval");
        out.right.insert(out.right.end(), roots.begin(), roots.end());
    }
    std::sort(out.left.begin(), out.left.end());
    std::sort(out.right.begin(), out.right.end());
    return out;
}

OutlierSet general_scm_outliers(const CoefficientSchedule& schedule, double tol) {
    const double rho = schedule.rho();
    OutlierSet out;
    long prev_end = 0;
    long min_gap = std::numeric_limits<long>::max();
    for (const auto& seg : schedule.segments()) {
        min_gap = std::min(min_gap, seg.k - prev_end);
        prev_end = seg.last();
        if (!(std::abs(rho + seg.eps) > std::abs(rho))) {
            std::cerr << "[arspec] warning: segment at k=" << seg.k
                      << " has |rho+eps| <= |rho|; its submodel has no outliers\n";
            continue;
        }
        OutlierSet sub = interval_scm_outliers(rho, seg.eps, seg.h, tol);
        out.left.insert(out.left.end(), sub.left.begin(), sub.left.end());
        out.right.insert(out.right.end(), sub.right.begin(), sub.right.end());
    }
    if (!schedule.segments().empty() && min_gap < 50)
        std::cerr << "[arspec] warning: min segment gap " << min_gap
                  << " is small; union approximation error decays like |c|^gap\n";
    std::sort(out.left.begin(), out.left.end());
    std::sort(out.right.begin(), out.right.end());
    return out;
}

std::vector<double> identify_magnitudes(double rho,
                                        const std::vector<std::pair<double, double>>& pairs) {
    check_rho(rho);
    const SpectralLaw law(rho);
    std::vector<double> left, right;
    for (const auto& [m, M] : pairs) {
        if (!(m > 0.0 && m < law.a))
            throw std::invalid_argument("identify_magnitudes: left value outside (0, a_rho)");
        if (!(M > law.b))
            throw std::invalid_argument("identify_magnitudes: right value must exceed b_rho");
        left.push_back(m);
        right.push_back(M);
    }
    std::sort(left.begin(), left.end());                       // ascending
    std::sort(right.begin(), right.end(), std::greater<>());   // descending
    std::vector<double> eps_out;
    for (std::size_t i = 0; i < left.size(); ++i) {
        const double prod = f_inverse(rho, left[i]) * f_inverse(rho, right[i]);
        // f^{-1}(m) f^{-1}(M) = -rho^2 / (eps+rho)^2
        if (!(prod < 0.0))
            throw std::invalid_argument("identify_magnitudes: inconsistent outlier pair");
        const double re2 = -rho * rho / prod;
        const double re = std::sqrt(re2); // |eps + rho|
        // eps restricted to E_rho: positive when rho > 0, negative when rho < 0
        const double eps = rho > 0.0 ? re - rho : -re - rho;
        if ((rho > 0.0 && eps <= 0.0) || (rho < 0.0 && eps >= 0.0))
            throw std::invalid_argument("identify_magnitudes: recovered eps outside E_rho");
        eps_out.push_back(eps);
    }
    return eps_out;
}

BreakPointGuess locate_break_heuristic(const SymTridiagonal& T) {
    const int n = T.n();
    auto extremes = eigenvalues_range(T, 1, 1);
    auto top = eigenvalues_range(T, n, n);
    const auto v1 = eigenvector_symtridiag(T, extremes[0]);
    const auto vn = eigenvector_symtridiag(T, top[0]);
    BreakPointGuess guess;
    const double spike_threshold = 3.0 / std::sqrt(static_cast<double>(n));
    auto locate = [&](const std::vector<double>& v, long& k, bool& localized) {
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        k = imax + 1; // 1-based
        localized = std::abs(v[imax]) >= spike_threshold;
    };
    locate(v1, guess.k_from_min, guess.localized_min);
    locate(vn, guess.k_from_max, guess.localized_max);
    return guess;
}

std::pair<double, double> epsilon_limit_checks(double rho, double eps) {
    if (!(std::abs(rho + eps) > std::abs(rho)))
        throw std::invalid_argument("epsilon_limit_checks: requires |rho+eps| > |rho|");
    const OutlierSet out = single_scm_outliers(rho, eps);
    const SpectralLaw law(rho);
    return {out.left[0], (out.right[0] - law.b) / (eps * eps)};
}

std::string outlier_report_to_json(double rho, const OutlierSet& out, const BracketReport* brackets,
                                   const std::string& method) {
    nlohmann::json j;
    j["rho"] = rho;
    j["left"] = out.left;
    j["right"] = out.right;
    j["method"] = method;
    if (brackets) {
        nlohmann::json b;
        b["p"] = brackets->p;
        b["q"] = brackets->q;
        b["upper_bound"] = brackets->upper_bound;
        b["left_intervals"] = nlohmann::json::array();
        for (const auto& iv : brackets->left_intervals)
            b["left_intervals"].push_back({iv.lo, iv.hi});
        b["right_intervals"] = nlohmann::json::array();
        for (const auto& iv : brackets->right_intervals)
            b["right_intervals"].push_back({iv.lo, iv.hi});
        if (!brackets->note.empty()) b["note"] = brackets->note;
        j["brackets"] = b;
    }
    return j.dump(2);
}

} // namespace arspec
