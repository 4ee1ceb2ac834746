#include "arspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "arspec/errors.hpp"
#include "arspec/quadrature.hpp"

namespace arspec {

SpectralLaw::SpectralLaw(double rho_) : rho(rho_) {
    if (!(std::abs(rho_) < 1.0) || rho_ == 0.0)
        throw std::invalid_argument("SpectralLaw: 0 < |rho| < 1 required");
    const double ar = std::abs(rho_);
    a = (1.0 - ar) * (1.0 - ar);
    b = (1.0 + ar) * (1.0 + ar);
}

MixtureLaw::MixtureLaw(std::vector<std::pair<double, SpectralLaw>> comps)
    : components(std::move(comps)) {
    double total = 0.0;
    for (const auto& [w, law] : components) {
        if (w < 0.0 || w > 1.0) throw std::invalid_argument("MixtureLaw: weight outside [0,1]");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("MixtureLaw: weights must sum to 1");
}

namespace {

struct SturmData {
    const std::vector<double>& diag;
    std::vector<double> off2; // squared off-diagonals
    double pivmin;

    explicit SturmData(const SymTridiagonal& T) : diag(T.diag) {
        off2.resize(T.off.size());
        double maxoff2 = 0.0;
        for (std::size_t i = 0; i < T.off.size(); ++i) {
            off2[i] = T.off[i] * T.off[i];
            maxoff2 = std::max(maxoff2, off2[i]);
        }
        pivmin = std::max(maxoff2, 1.0) * std::numeric_limits<double>::min() / 1e-10;
        if (pivmin <= 0.0 || !std::isfinite(pivmin)) pivmin = 1e-300;
    }

    // number of eigenvalues strictly below x
    int count_below(double x) const {
        int count = 0;
        double d = diag[0] - x;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++count;
        for (std::size_t i = 1; i < diag.size(); ++i) {
            d = diag[i] - x - off2[i - 1] / d;
            if (std::abs(d) < pivmin) d = -pivmin;
            if (d < 0.0) ++count;
        }
        return count;
    }
};

void check_finite(const SymTridiagonal& T) {
    for (double v : T.diag)
        if (!std::isfinite(v)) throw std::invalid_argument("eigensolver: NaN/Inf in diagonal");
    for (double v : T.off)
        if (!std::isfinite(v)) throw std::invalid_argument("eigensolver: NaN/Inf in off-diagonal");
}

} // namespace

int sturm_count_below(const SymTridiagonal& T, double x) {
    return SturmData(T).count_below(x);
}

std::vector<double> eigenvalues_range(const SymTridiagonal& T, int ilo, int ihi, double tol) {
    check_finite(T);
    const int n = T.n();
    if (ilo < 1 || ihi > n || ilo > ihi)
        throw std::invalid_argument("eigenvalues_range: bad index range");
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalues_range: tol must be > 0");
    double glo, ghi;
    T.gershgorin(glo, ghi);
    const double scale = std::max({std::abs(glo), std::abs(ghi), 1.0});
    const double abstol = std::max(tol * scale, 4.0 * std::numeric_limits<double>::epsilon() * scale);
    SturmData sturm(T);

    // Bisection tree: refine intervals until each contains eigenvalues of one
    // cluster narrower than abstol.  Shares Sturm evaluations across indices.
    struct Node {
        double lo, hi;
        int clo, chi; // count_below(lo), count_below(hi)
    };
    std::vector<double> out(static_cast<std::size_t>(ihi - ilo + 1));
    std::vector<Node> stack;
    {
        double lo = glo - abstol, hi = ghi + abstol;
        int clo = sturm.count_below(lo), chi = sturm.count_below(hi);
        stack.push_back({lo, hi, clo, chi});
    }
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        const int first = std::max(nd.clo + 1, ilo);
        const int last = std::min(nd.chi, ihi);
        if (first > last) continue;
        if (nd.hi - nd.lo <= abstol) {
            const double mid = 0.5 * (nd.lo + nd.hi);
            for (int k = first; k <= last; ++k) out[static_cast<std::size_t>(k - ilo)] = mid;
            continue;
        }
        const double mid = 0.5 * (nd.lo + nd.hi);
        const int cmid = sturm.count_below(mid);
        stack.push_back({nd.lo, mid, nd.clo, cmid});
        stack.push_back({mid, nd.hi, cmid, nd.chi});
    }
    return out;
}

Spectrum eigenvalues_symtridiag(const SymTridiagonal& T, double tol) {
    Spectrum s;
    s.eigenvalues = eigenvalues_range(T, 1, T.n(), tol);
    return s;
}

std::vector<double> eigenvector_symtridiag(const SymTridiagonal& T, double lambda) {
    check_finite(T);
    const int n = T.n();
    const double scale = [&] {
        double m = 0.0;
        for (int i = 0; i < n; ++i) {
            double r = std::abs(T.diag[i]);
            if (i > 0) r += std::abs(T.off[i - 1]);
            if (i + 1 < n) r += std::abs(T.off[i]);
            m = std::max(m, r);
        }
        return std::max(m, 1.0);
    }();

    // LU of (T - lambda I) with partial pivoting; a tiny shift keeps the
    // factorization nonsingular when lambda is (numerically) exact.
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<double> a(n), b(n, 0.0), c(n, 0.0), s2(n, 0.0), l(n, 0.0);
    std::vector<int> piv(n, 0);
    for (int i = 0; i < n; ++i) a[i] = T.diag[i] - lambda;
    for (int i = 0; i + 1 < n; ++i) {
        b[i] = T.off[i];
        c[i + 1] = T.off[i];
    }
    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(c[i + 1]) > std::abs(a[i])) {
            piv[i] = 1;
            std::swap(a[i], c[i + 1]);
            std::swap(b[i], a[i + 1]);
            std::swap(s2[i], b[i + 1]);
        }
        if (std::abs(a[i]) < eps * scale) a[i] = eps * scale;
        const double m = c[i + 1] / a[i];
        l[i] = m;
        a[i + 1] -= m * b[i];
        b[i + 1] -= m * s2[i];
        c[i + 1] = 0.0;
    }
    if (std::abs(a[n - 1]) < eps * scale) a[n - 1] = eps * scale;

    auto solve = [&](std::vector<double>& x) {
        for (int i = 0; i < n - 1; ++i) {
            if (piv[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= l[i] * x[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = x[i];
            if (i + 1 < n) v -= b[i] * x[i + 1];
            if (i + 2 < n) v -= s2[i] * x[i + 2];
            x[i] = v / a[i];
        }
    };
    auto residual_inf = [&](const std::vector<double>& v) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            double tv = T.diag[i] * v[i];
            if (i > 0) tv += T.off[i - 1] * v[i - 1];
            if (i + 1 < n) tv += T.off[i] * v[i + 1];
            r = std::max(r, std::abs(tv - lambda * v[i]));
        }
        return r;
    };

    // deterministic start with no structural symmetry
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.7 * (i + 1)) + 0.3 * std::cos(1.9 * (i + 1));
    const int max_iter = 50;
    for (int it = 0; it < max_iter; ++it) {
        solve(v);
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0 || !std::isfinite(norm))
            throw numerical_error("inverse iteration: breakdown");
        for (double& x : v) x /= norm;
        if (residual_inf(v) <= 1e-8 * scale) {
            int imax = 0;
            for (int i = 1; i < n; ++i)
                if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
            if (v[imax] < 0.0)
                for (double& x : v) x = -x;
            return v;
        }
        if (it > 0 && it % 5 == 0) {
            // stuck in a bad starting direction; perturb deterministically
            for (int i = 0; i < n; ++i) v[i] += 1e-3 * std::sin(2.3 * (i + 1) + it);
        }
    }
    throw numerical_error("inverse iteration: no convergence");
}

std::pair<double, std::vector<double>> perturbed_eigenpair_closed_form(double rho, int n, int k) {
    if (!(std::abs(rho) < 1.0) || rho == 0.0)
        throw std::invalid_argument("perturbed_eigenpair_closed_form: 0 < |rho| < 1 required");
    if (k < 1 || k > n) throw std::invalid_argument("perturbed_eigenpair_closed_form: k out of range");
    // For rho > 0 the formula index equals the ascending rank; for rho < 0 the
    // same set appears in reverse order.
    const int idx = rho > 0.0 ? k : n + 1 - k;
    const double theta = idx * M_PI / (n + 1);
    const double lambda = 1.0 - 2.0 * rho * std::cos(theta) + rho * rho;
    std::vector<double> u(n);
    const double c = std::sqrt(2.0 / (n + 1));
    for (int j = 1; j <= n; ++j) u[j - 1] = c * std::sin(j * theta);
    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    if (u[imax] < 0.0)
        for (double& x : u) x = -x;
    return {lambda, u};
}

std::pair<double, double> support_bounds(double rho) {
    SpectralLaw law(rho);
    return {law.a, law.b};
}

double asd_cdf(const SpectralLaw& law, double t) {
    if (t < law.a) return 0.0;
    if (t >= law.b) return 1.0;
    const double ar = std::abs(law.rho);
    double c = (1.0 + ar * ar - t) / (2.0 * ar);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) / M_PI;
}

double asd_cdf_quadrature(const SpectralLaw& law, double t) {
    const double rho = law.rho;
    auto indicator = [rho, t](double x) {
        return (1.0 + rho * rho - 2.0 * rho * std::cos(x)) <= t ? 1.0 : 0.0;
    };
    // The indicator is piecewise constant; integrate the smooth boundary
    // directly instead: measure of {x : cos x >= c} (rho>0) etc.  For the
    // oracle we simply use a fine midpoint rule on the indicator.
    const int N = 200000;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) acc += indicator((i + 0.5) * 2.0 * M_PI / N);
    return acc / N;
}

double mixture_cdf(const MixtureLaw& mix, double t) {
    double acc = 0.0;
    for (const auto& [w, law] : mix.components) acc += w * asd_cdf(law, t);
    return acc;
}

double stieltjes(const SpectralLaw& law, double z) {
    if (z >= law.a && z <= law.b)
        throw std::domain_error("stieltjes: z inside the support");
    const double g = 1.0 / std::sqrt((z - law.a) * (z - law.b));
    return z > law.b ? g : -g;
}

double asd_moment(const SpectralLaw& law, int k) {
    if (k < 0) throw std::invalid_argument("asd_moment: k must be >= 0");
    const double ar = std::abs(law.rho);
    const double u = 1.0 + ar * ar;
    // (1/2pi) int (u - 2 rho cos x)^k dx; odd cosine powers integrate to zero,
    // even powers give central binomial coefficients.
    double acc = 0.0;
    double binom_kj = 1.0; // C(k, j)
    double pow_u = std::pow(u, k);
    for (int j = 0; j <= k; ++j) {
        if (j % 2 == 0) {
            // (1/2pi) int cos^j = C(j, j/2) / 2^j
            double cj = 1.0;
            for (int i = 0; i < j / 2; ++i) cj *= static_cast<double>(j - i) / (i + 1);
            cj /= std::pow(2.0, j);
            acc += binom_kj * pow_u * std::pow(2.0 * ar, j) * cj;
        }
        binom_kj *= static_cast<double>(k - j) / (j + 1);
        pow_u /= u;
    }
    return acc;
}

double sine_kernel_G(double a, int k1, int k2) {
    if (!(std::abs(a) > 1.0)) throw std::domain_error("sine_kernel_G: |a| > 1 required");
    if (k1 < 1 || k2 < 1) throw std::invalid_argument("sine_kernel_G: k1,k2 must be positive");
    const double root = std::sqrt(a * a - 1.0);
    const double z1 = -a - root;
    const double z2 = -a + root;
    const int kd = std::abs(k1 - k2);
    const int ks = k1 + k2;
    if (a > 1.0)
        return 2.0 / (z2 - z1) * (std::pow(z2, kd) - std::pow(z2, ks));
    return 2.0 / (z1 - z2) * (std::pow(z1, kd) - std::pow(z1, ks));
}

double chebyshev_U(int n, double x) {
    if (n < 0) throw std::invalid_argument("chebyshev_U: n must be >= 0");
    if (n == 0) return 1.0;
    double um1 = 1.0, u = 2.0 * x;
    for (int i = 2; i <= n; ++i) {
        const double next = 2.0 * x * u - um1;
        um1 = u;
        u = next;
    }
    return u;
}

double det_bordered_tridiag(double x, double f_val, double g_val, int nn) {
    if (nn < 2) throw std::invalid_argument("det_bordered_tridiag: nn must be >= 2");
    return (2.0 * x + f_val + g_val) * chebyshev_U(nn - 1, x) +
           (f_val * g_val - 1.0) * chebyshev_U(nn - 2, x);
}

SymTridiagonal tridiagonalize(const Matrix& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("tridiagonalize: matrix must be square");
    const int n = A.rows();
    Matrix W = A; // working copy, overwritten
    SymTridiagonal T;
    T.diag.resize(n);
    T.off.assign(std::max(n - 1, 0), 0.0);
    std::vector<double> v(n), p(n), w(n);
    for (int k = 0; k < n - 2; ++k) {
        double alpha = 0.0;
        for (int i = k + 1; i < n; ++i) alpha += W(i, k) * W(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        if (W(k + 1, k) > 0.0) alpha = -alpha;
        // Householder vector v annihilating column k below the subdiagonal
        double r2 = alpha * alpha - W(k + 1, k) * alpha;
        if (r2 <= 0.0) continue;
        std::fill(v.begin(), v.end(), 0.0);
        v[k + 1] = W(k + 1, k) - alpha;
        for (int i = k + 2; i < n; ++i) v[i] = W(i, k);
        const double beta = 1.0 / (2.0 * r2);
        // p = beta * W v ; w = p - (beta * p.v) v ; W <- W - 2 v w^T - 2 w v^T
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = k + 1; j < n; ++j) acc += W(i, j) * v[j];
            p[i] = 2.0 * beta * acc;
        }
        double pv = 0.0;
        for (int i = k + 1; i < n; ++i) pv += p[i] * v[i];
        for (int i = 0; i < n; ++i) w[i] = p[i] - beta * pv * v[i];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) W(i, j) -= v[i] * w[j] + w[i] * v[j];
    }
    for (int i = 0; i < n; ++i) T.diag[i] = W(i, i);
    for (int i = 0; i + 1 < n; ++i) T.off[i] = W(i + 1, i);
    return T;
}

std::string spectrum_to_csv(const Spectrum& s) {
    std::ostringstream out;
    out.precision(17);
    out << "index,eigenvalue\n";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        out << (i + 1) << ',' << s.eigenvalues[i] << '\n';
    return out.str();
}

std::string histogram_to_csv(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("histogram_to_csv: bins must be >= 1");
    std::ostringstream out;
    out.precision(17);
    out << "bin_left,bin_right,count\n";
    if (values.empty()) return out.str();
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / bins;
    std::vector<long> counts(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        ++counts[b];
    }
    for (int b = 0; b < bins; ++b)
        out << lo + b * width << ',' << lo + (b + 1) * width << ',' << counts[b] << '\n';
    return out.str();
}

} // namespace arspec
