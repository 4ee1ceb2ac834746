#ifndef ARSPEC_SPECTRAL_HPP
#define ARSPEC_SPECTRAL_HPP

#include <utility>
#include <vector>

#include "arspec/dense.hpp"
#include "arspec/tridiagonal.hpp"

namespace arspec {

struct Spectrum {
    std::vector<double> eigenvalues; // ascending
};

// The limiting spectral law of the null precision matrix: support
// [(1-|rho|)^2, (1+|rho|)^2].
struct SpectralLaw {
    double rho;
    double a;
    double b;

    explicit SpectralLaw(double rho_);
};

struct MixtureLaw {
    std::vector<std::pair<double, SpectralLaw>> components; // (weight, law)

    explicit MixtureLaw(std::vector<std::pair<double, SpectralLaw>> comps);
};

// All n eigenvalues by Sturm-sequence bisection, ascending.  tol is relative
// to the Gershgorin radius.
Spectrum eigenvalues_symtridiag(const SymTridiagonal& T, double tol = 1e-12);

// Eigenvalues with 1-based indices ilo..ihi (ascending order), same method.
std::vector<double> eigenvalues_range(const SymTridiagonal& T, int ilo, int ihi,
                                      double tol = 1e-12);

// Number of eigenvalues of T strictly below x (Sturm count).
int sturm_count_below(const SymTridiagonal& T, double x);

// Unit eigenvector by inverse iteration; sign fixed so the largest-magnitude
// entry is positive.
std::vector<double> eigenvector_symtridiag(const SymTridiagonal& T, double lambda);

// Closed-form eigenpair of the perturbed Toeplitz matrix, k-th smallest.
std::pair<double, std::vector<double>> perturbed_eigenpair_closed_form(double rho, int n, int k);

// ((1-|rho|)^2, (1+|rho|)^2)
std::pair<double, double> support_bounds(double rho);

// Distribution function of the limiting law, closed-form arccos inversion.
double asd_cdf(const SpectralLaw& law, double t);

// Same value by adaptive quadrature of the defining integral (fallback/oracle).
double asd_cdf_quadrature(const SpectralLaw& law, double t);

double mixture_cdf(const MixtureLaw& mix, double t);

// Stieltjes transform at real z outside the support: +-1/sqrt((z-a)(z-b)).
double stieltjes(const SpectralLaw& law, double z);

// k-th moment of the limiting law, closed-form binomial expansion.
double asd_moment(const SpectralLaw& law, int k);

// (1/pi) integral_0^{2pi} sin(k1 x) sin(k2 x) / (a + cos x) dx, |a| > 1.
double sine_kernel_G(double a, int k1, int k2);

// Chebyshev polynomial of the second kind, three-term recurrence.
double chebyshev_U(int n, double x);

// det of the bordered tridiagonal (2x+f, 1, ..., 1, 2x+g) of size nn:
// (2x+f+g) U_{nn-1}(x) + (f g - 1) U_{nn-2}(x).
double det_bordered_tridiag(double x, double f_val, double g_val, int nn);

// Householder reduction of a dense symmetric matrix to tridiagonal form
// (eigenvalues only; Q is not accumulated).
SymTridiagonal tridiagonalize(const Matrix& A);

// CSV exports for spectra and histograms.
std::string spectrum_to_csv(const Spectrum& s);
std::string histogram_to_csv(const std::vector<double>& values, int bins);

} // namespace arspec

#endif
