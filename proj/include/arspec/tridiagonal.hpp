#ifndef ARSPEC_TRIDIAGONAL_HPP
#define ARSPEC_TRIDIAGONAL_HPP

#include <string>
#include <vector>

#include "arspec/dense.hpp"
#include "arspec/schedule.hpp"

namespace arspec {

// Symmetric tridiagonal matrix stored as two vectors.  diag[i] is the (i,i)
// entry (0-based here; the display convention elsewhere is 1-based).
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off; // size n-1

    int n() const { return static_cast<int>(diag.size()); }

    Matrix to_dense() const;

    // Gershgorin bounds [lo, hi] containing all eigenvalues.
    void gershgorin(double& lo, double& hi) const;
};

// Exact precision matrix of the n-section of the SCM:
// diag_i = (1 + rho_{i+1}^2)/sigma2 for i < n, diag_n = 1/sigma2,
// off_i = -rho_{i+1}/sigma2 (1-based display).
SymTridiagonal precision_matrix(const CoefficientSchedule& schedule, int n, double sigma2 = 1.0);

// Null precision with the corner entry lifted to 1+rho^2: an exact Toeplitz
// tridiagonal whose eigenpairs have closed forms.
SymTridiagonal perturbed_null_precision(double rho, int n);

// Heteroscedastic construction following the published display verbatim:
// diag_n = sigma_n^2, diag_i = sigma_i^2 + sigma_{i+1}^2 rho^2,
// off_i = -sigma_{i+1}^2 rho.  Note this is NOT the inverse covariance of the
// heteroscedastic recursion unless all xi = 0 (the exact inverse carries
// 1/sigma^2 factors); see hetero_inverse_covariance for the exact object.
SymTridiagonal hetero_precision(double rho, const VarianceSchedule& vs, int n);

// Exact inverse covariance L^T D^{-1} L of the heteroscedastic recursion.
// Kept alongside hetero_precision so the discrepancy between the two is
// observable rather than silently resolved.
SymTridiagonal hetero_inverse_covariance(double rho, const VarianceSchedule& vs, int n);

// Dense inverse of a positive definite tridiagonal matrix (test oracle and
// simulation cross-check; production code never leaves the tridiagonal form).
Matrix covariance_from_precision(const SymTridiagonal& T);

// CSV triplet export "i,j,value" of the nonzero band (1-based indices).
std::string tridiagonal_to_csv(const SymTridiagonal& T);

} // namespace arspec

#endif
