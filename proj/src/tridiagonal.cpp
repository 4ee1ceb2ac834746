#include "arspec/tridiagonal.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "arspec/errors.hpp"

namespace arspec {

Matrix SymTridiagonal::to_dense() const {
    Matrix m(n(), n());
    for (int i = 0; i < n(); ++i) {
        m(i, i) = diag[i];
        if (i + 1 < n()) {
            m(i, i + 1) = off[i];
            m(i + 1, i) = off[i];
        }
    }
    return m;
}

void SymTridiagonal::gershgorin(double& lo, double& hi) const {
    lo = diag[0];
    hi = diag[0];
    const int nn = n();
    for (int i = 0; i < nn; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < nn) r += std::abs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
}

SymTridiagonal precision_matrix(const CoefficientSchedule& schedule, int n, double sigma2) {
    if (n < 2) throw std::invalid_argument("precision_matrix: n must be >= 2");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("precision_matrix: sigma2 must be > 0");
    if (schedule.max_segment_index() > n)
        throw std::invalid_argument("precision_matrix: a change segment exceeds n");
    SymTridiagonal T;
    T.diag.resize(n);
    T.off.resize(n - 1);
    const double inv = 1.0 / sigma2;
    for (int i = 1; i < n; ++i) {
        const double r = schedule.coefficient_at(i + 1); // rho_{i+1}, 1-based
        T.diag[i - 1] = (1.0 + r * r) * inv;
        T.off[i - 1] = -r * inv;
    }
    T.diag[n - 1] = inv;
    return T;
}

SymTridiagonal perturbed_null_precision(double rho, int n) {
    if (!(std::abs(rho) < 1.0) || rho == 0.0)
        throw std::invalid_argument("perturbed_null_precision: 0 < |rho| < 1 required");
    if (n < 2) throw std::invalid_argument("perturbed_null_precision: n must be >= 2");
    SymTridiagonal T;
    T.diag.assign(n, 1.0 + rho * rho);
    T.off.assign(n - 1, -rho);
    return T;
}

SymTridiagonal hetero_precision(double rho, const VarianceSchedule& vs, int n) {
    if (n < 2) throw std::invalid_argument("hetero_precision: n must be >= 2");
    if (!(std::abs(rho) < 1.0) || rho == 0.0)
        throw std::invalid_argument("hetero_precision: 0 < |rho| < 1 required");
    SymTridiagonal T;
    T.diag.resize(n);
    T.off.resize(n - 1);
    for (int i = 1; i < n; ++i) {
        const double si = vs.variance_at(i);
        const double sn = vs.variance_at(i + 1);
        T.diag[i - 1] = si + sn * rho * rho;
        T.off[i - 1] = -sn * rho;
    }
    T.diag[n - 1] = vs.variance_at(n);
    return T;
}

SymTridiagonal hetero_inverse_covariance(double rho, const VarianceSchedule& vs, int n) {
    if (n < 2) throw std::invalid_argument("hetero_inverse_covariance: n must be >= 2");
    SymTridiagonal T;
    T.diag.resize(n);
    T.off.resize(n - 1);
    for (int i = 1; i < n; ++i) {
        const double si = vs.variance_at(i);
        const double sn = vs.variance_at(i + 1);
        T.diag[i - 1] = 1.0 / si + rho * rho / sn;
        T.off[i - 1] = -rho / sn;
    }
    T.diag[n - 1] = 1.0 / vs.variance_at(n);
    return T;
}

namespace {

// Solve T x = b for tridiagonal T by LU with partial pivoting (two
// superdiagonals in the U factor).
struct TridiagLU {
    int n;
    std::vector<double> d0, d1, d2; // U diagonals
    std::vector<double> l;          // multipliers
    std::vector<int> piv;           // 1 if rows i, i+1 swapped

    explicit TridiagLU(const SymTridiagonal& T) {
        n = T.n();
        d0.resize(n);
        d1.assign(n, 0.0);
        d2.assign(n, 0.0);
        l.assign(n, 0.0);
        piv.assign(n, 0);
        // working copies of the three bands
        std::vector<double> a(n), b(n, 0.0), c(n, 0.0); // diag, super, sub
        for (int i = 0; i < n; ++i) a[i] = T.diag[i];
        for (int i = 0; i + 1 < n; ++i) {
            b[i] = T.off[i];
            c[i + 1] = T.off[i];
        }
        std::vector<double> super2(n, 0.0);
        for (int i = 0; i < n - 1; ++i) {
            if (std::abs(c[i + 1]) > std::abs(a[i])) {
                piv[i] = 1;
                std::swap(a[i], c[i + 1]);
                std::swap(b[i], a[i + 1]);
                std::swap(super2[i], b[i + 1]);
            }
            if (a[i] == 0.0) throw numerical_error("tridiagonal LU: zero pivot");
            const double m = c[i + 1] / a[i];
            l[i] = m;
            a[i + 1] -= m * b[i];
            b[i + 1] -= m * super2[i];
            c[i + 1] = 0.0;
        }
        for (int i = 0; i < n; ++i) {
            d0[i] = a[i];
            d1[i] = b[i];
            d2[i] = super2[i];
        }
    }

    void solve(std::vector<double>& x) const {
        for (int i = 0; i < n - 1; ++i) {
            if (piv[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= l[i] * x[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = x[i];
            if (i + 1 < n) v -= d1[i] * x[i + 1];
            if (i + 2 < n) v -= d2[i] * x[i + 2];
            if (d0[i] == 0.0) throw numerical_error("tridiagonal LU: singular matrix");
            x[i] = v / d0[i];
        }
    }
};

bool is_positive_definite(const SymTridiagonal& T) {
    // LDL^T pivots of a tridiagonal: d_i = diag_i - off_{i-1}^2 / d_{i-1}
    double d = T.diag[0];
    if (d <= 0.0) return false;
    for (int i = 1; i < T.n(); ++i) {
        d = T.diag[i] - T.off[i - 1] * T.off[i - 1] / d;
        if (d <= 0.0) return false;
    }
    return true;
}

} // namespace

Matrix covariance_from_precision(const SymTridiagonal& T) {
    if (!is_positive_definite(T))
        throw numerical_error("covariance_from_precision: matrix is not positive definite");
    const int n = T.n();
    TridiagLU lu(T);
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        lu.solve(col);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    // symmetrize away roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = v;
            inv(j, i) = v;
        }
    return inv;
}

std::string tridiagonal_to_csv(const SymTridiagonal& T) {
    std::ostringstream out;
    out.precision(17);
    out << "i,j,value\n";
    for (int i = 0; i < T.n(); ++i) {
        if (i > 0) out << (i + 1) << ',' << i << ',' << T.off[i - 1] << '\n';
        out << (i + 1) << ',' << (i + 1) << ',' << T.diag[i] << '\n';
        if (i + 1 < T.n()) out << (i + 1) << ',' << (i + 2) << ',' << T.off[i] << '\n';
    }
    return out.str();
}

} // namespace arspec
