#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "arspec/quadrature.hpp"
#include "arspec/spectral.hpp"
#include "arspec/tridiagonal.hpp"

using namespace arspec;

namespace {

// Dense LU determinant with partial pivoting; oracle for small matrices only.
double dense_determinant(Matrix m) {
    const int n = m.rows();
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (m(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (int r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

double empirical_cdf(const std::vector<double>& sorted, double t) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

} // namespace

TEST_CASE("eigenvalues_symtridiag: diagonal matrix") {
    SymTridiagonal T;
    T.diag = {3.0, 1.0, 2.0};
    T.off = {0.0, 0.0};
    const auto ev = eigenvalues_symtridiag(T).eigenvalues;
    REQUIRE(ev.size() == 3);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(3.0));
}

TEST_CASE("eigenvalues_symtridiag rejects non-finite entries") {
    SymTridiagonal T;
    T.diag = {1.0, std::nan("")};
    T.off = {0.5};
    CHECK_THROWS_AS(eigenvalues_symtridiag(T), std::invalid_argument);
}

TEST_CASE("perturbed Toeplitz eigenvalues match the closed form") {
    for (double rho : {0.3, -0.3, 0.7}) {
        const int n = 200;
        const auto T = perturbed_null_precision(rho, n);
        const auto ev = eigenvalues_symtridiag(T).eigenvalues;
        for (int k = 1; k <= n; ++k) {
            const auto [lambda, vec] = perturbed_eigenpair_closed_form(rho, n, k);
            CHECK(std::abs(ev[static_cast<std::size_t>(k - 1)] - lambda) < 1e-10);
        }
    }
}

TEST_CASE("closed-form eigenpair values at n=3") {
    const auto [l1, v1] = perturbed_eigenpair_closed_form(0.3, 3, 1);
    CHECK(l1 == doctest::Approx(1.09 - 0.6 * std::cos(M_PI / 4.0)).epsilon(1e-12));
    const auto [l2, v2] = perturbed_eigenpair_closed_form(0.3, 3, 2);
    CHECK(l2 == doctest::Approx(1.09).epsilon(1e-12));
    // u_{j1} = sqrt(2/4) sin(j pi / 4)
    for (int j = 1; j <= 3; ++j)
        CHECK(std::abs(v1[static_cast<std::size_t>(j - 1)]) ==
              doctest::Approx(std::sqrt(0.5) * std::abs(std::sin(j * M_PI / 4.0))).epsilon(1e-12));
    CHECK_THROWS_AS(perturbed_eigenpair_closed_form(0.3, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(perturbed_eigenpair_closed_form(0.3, 3, 4), std::invalid_argument);
}

TEST_CASE("closed-form eigenvalues are ascending for negative rho too") {
    for (double rho : {0.4, -0.4}) {
        const int n = 17;
        double prev = -1.0;
        for (int k = 1; k <= n; ++k) {
            const double l = perturbed_eigenpair_closed_form(rho, n, k).first;
            CHECK(l > prev);
            prev = l;
        }
    }
}

TEST_CASE("eigenvector_symtridiag: trivial and closed-form cases") {
    SymTridiagonal D;
    D.diag = {2.0, 1.0};
    D.off = {0.0};
    const auto e1 = eigenvector_symtridiag(D, 2.0);
    CHECK(e1[0] == doctest::Approx(1.0));
    CHECK(e1[1] == doctest::Approx(0.0));

    const int n = 60;
    const auto T = perturbed_null_precision(0.3, n);
    for (int k : {1, 7, n}) {
        const auto [lambda, u] = perturbed_eigenpair_closed_form(0.3, n, k);
        const auto v = eigenvector_symtridiag(T, lambda);
        // match up to a global sign
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        const double sign = dot >= 0.0 ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j)
            CHECK(std::abs(sign * u[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(j)]) < 1e-8);
    }
}

TEST_CASE("eigenvector residual on a random SCM precision") {
    CoefficientSchedule s(0.4, {{100, 2, 0.3}});
    const auto T = precision_matrix(s, 500);
    const auto ev = eigenvalues_symtridiag(T).eigenvalues;
    double norm_t = 0.0;
    for (double d : T.diag) norm_t = std::max(norm_t, std::abs(d));
    for (double o : T.off) norm_t = std::max(norm_t, std::abs(o));
    for (std::size_t idx : {std::size_t{0}, std::size_t{250}, std::size_t{499}}) {
        const double lambda = ev[idx];
        const auto v = eigenvector_symtridiag(T, lambda);
        double l2 = 0.0, resid = 0.0;
        const int n = T.n();
        for (int i = 0; i < n; ++i) {
            double r = T.diag[i] * v[static_cast<std::size_t>(i)] - lambda * v[static_cast<std::size_t>(i)];
            if (i > 0) r += T.off[i - 1] * v[static_cast<std::size_t>(i - 1)];
            if (i + 1 < n) r += T.off[i] * v[static_cast<std::size_t>(i + 1)];
            resid = std::max(resid, std::abs(r));
            l2 += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        CHECK(std::sqrt(l2) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(resid <= 1e-8 * norm_t);
    }
}

TEST_CASE("closed-form eigenvectors are orthonormal") {
    const int n = 300;
    double worst = 0.0;
    std::vector<std::vector<double>> u;
    for (int k = 1; k <= n; ++k) u.push_back(perturbed_eigenpair_closed_form(0.5, n, k).second);
    // spot-check a band of pairs rather than all n^2 to keep runtime low
    for (int a = 0; a < n; a += 23)
        for (int b = a; b < n; b += 17) {
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += u[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    CHECK(worst <= 1e-8);
}

TEST_CASE("null precision spectrum stays near the limiting support") {
    CoefficientSchedule s(0.3);
    const auto ev = eigenvalues_symtridiag(precision_matrix(s, 1000)).eigenvalues;
    CHECK(ev.front() >= 0.49 - 0.01);
    CHECK(ev.back() <= 1.69 + 0.01);
}

TEST_CASE("eigenvalues_range and sturm_count_below agree with the full solve") {
    CoefficientSchedule s(0.3, {{40, 1, 0.2}});
    const auto T = precision_matrix(s, 120);
    const auto full = eigenvalues_symtridiag(T).eigenvalues;
    const auto ends = eigenvalues_range(T, 1, 2);
    REQUIRE(ends.size() == 2);
    CHECK(ends[0] == doctest::Approx(full[0]).epsilon(1e-10));
    CHECK(ends[1] == doctest::Approx(full[1]).epsilon(1e-10));
    const auto top = eigenvalues_range(T, 120, 120);
    CHECK(top[0] == doctest::Approx(full.back()).epsilon(1e-10));
    CHECK(sturm_count_below(T, full[5] + 1e-9) == 6);
    CHECK(sturm_count_below(T, full[0] - 1e-6) == 0);
}

TEST_CASE("support_bounds: values, symmetry, algebraic identity") {
    const auto [a3, b3] = support_bounds(0.3);
    CHECK(a3 == doctest::Approx(0.49));
    CHECK(b3 == doctest::Approx(1.69));
    const auto [a5, b5] = support_bounds(-0.5);
    CHECK(a5 == doctest::Approx(0.25));
    CHECK(b5 == doctest::Approx(2.25));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-0.95, 0.95);
    for (int i = 0; i < 100; ++i) {
        double rho = unif(rng);
        if (rho == 0.0) rho = 0.5;
        const auto [a, b] = support_bounds(rho);
        CHECK(a * b == doctest::Approx((1 - rho * rho) * (1 - rho * rho)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(support_bounds(0.0), std::invalid_argument);
    CHECK_THROWS_AS(support_bounds(1.0), std::invalid_argument);
}

TEST_CASE("asd_cdf: support endpoints, symmetry, quadrature agreement") {
    SpectralLaw law(0.3);
    CHECK(asd_cdf(law, law.a - 0.01) == doctest::Approx(0.0));
    CHECK(asd_cdf(law, law.b) == doctest::Approx(1.0));
    CHECK(asd_cdf(law, 1.0 + 0.09) == doctest::Approx(0.5).epsilon(1e-10));
    // the density has inverse-square-root endpoint singularities, so the
    // adaptive quadrature only reaches ~1e-5 absolute accuracy here
    for (double t : {0.6, 0.9, 1.2, 1.5}) {
        CHECK(std::abs(asd_cdf(law, t) - asd_cdf_quadrature(law, t)) < 2e-5);
    }
    SpectralLaw neg(-0.4);
    for (double t : {0.5, 1.0, 1.6}) {
        CHECK(std::abs(asd_cdf(neg, t) - asd_cdf_quadrature(neg, t)) < 2e-5);
    }
}

TEST_CASE("asd_cdf: Kolmogorov distance to the empirical null spectrum") {
    SpectralLaw law(0.3);
    CoefficientSchedule s(0.3);
    auto ev = eigenvalues_symtridiag(precision_matrix(s, 4000)).eigenvalues;
    double ks = 0.0;
    for (double t = 0.4; t <= 1.8; t += 0.005)
        ks = std::max(ks, std::abs(asd_cdf(law, t) - empirical_cdf(ev, t)));
    CHECK(ks < 0.02);
}

TEST_CASE("mixture_cdf: degenerate and two-component behavior") {
    MixtureLaw single({{1.0, SpectralLaw(0.3)}});
    SpectralLaw law(0.3);
    for (double t : {0.6, 1.0, 1.5}) CHECK(mixture_cdf(single, t) == doctest::Approx(asd_cdf(law, t)));
    MixtureLaw two({{0.5, SpectralLaw(0.3)}, {0.5, SpectralLaw(0.5)}});
    CHECK(mixture_cdf(two, 10.0) == doctest::Approx(1.0));
    CHECK(mixture_cdf(two, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(MixtureLaw({{0.7, SpectralLaw(0.3)}}), std::invalid_argument);
}

TEST_CASE("mixture_cdf matches the spectrum of a long-segment change") {
    // change over 30% of the indices: the limiting law is the tau-mixture
    const int n = 3000;
    const long h = static_cast<long>(0.3 * n);
    CoefficientSchedule s(0.3, {{1000, h, 0.2}});
    auto ev = eigenvalues_symtridiag(precision_matrix(s, n)).eigenvalues;
    MixtureLaw mix({{0.7, SpectralLaw(0.3)}, {0.3, SpectralLaw(0.5)}});
    double ks = 0.0;
    for (double t = 0.2; t <= 2.4; t += 0.01)
        ks = std::max(ks, std::abs(mixture_cdf(mix, t) - empirical_cdf(ev, t)));
    CHECK(ks < 0.03);
}

TEST_CASE("stieltjes: closed-form values and tail behavior") {
    SpectralLaw law(0.3);
    CHECK(stieltjes(law, 2.0) == doctest::Approx(1.0 / std::sqrt(1.51 * 0.31)).epsilon(1e-10));
    CHECK(stieltjes(law, 2.0) == doctest::Approx(1.46160).epsilon(1e-5));
    CHECK(stieltjes(law, 0.2) == doctest::Approx(-1.0 / std::sqrt(0.29 * 1.49)).epsilon(1e-10));
    CHECK(stieltjes(law, 0.2) == doctest::Approx(-1.52129).epsilon(1e-5));
    for (double z : {50.0, 500.0, 5000.0})
        CHECK(z * stieltjes(law, z) == doctest::Approx(1.0).epsilon(10.0 / z));
    CHECK_THROWS_AS(stieltjes(law, 1.0), std::domain_error);
}

TEST_CASE("stieltjes matches the resolvent average of the null spectrum") {
    SpectralLaw law(0.3);
    CoefficientSchedule s(0.3);
    const auto ev = eigenvalues_symtridiag(precision_matrix(s, 2000)).eigenvalues;
    for (double z : {law.a - 0.3, law.b + 0.3}) {
        double avg = 0.0;
        for (double l : ev) avg += 1.0 / (z - l);
        avg /= static_cast<double>(ev.size());
        CHECK(std::abs(avg - stieltjes(law, z)) <= 0.05);
    }
}

TEST_CASE("asd_moment: closed forms and trace oracle") {
    SpectralLaw law(0.3);
    CHECK(asd_moment(law, 0) == doctest::Approx(1.0));
    CHECK(asd_moment(law, 1) == doctest::Approx(1.09).epsilon(1e-12));
    CHECK(asd_moment(law, 2) == doctest::Approx(1.3681).epsilon(1e-12));
    // quadrature oracle for k up to 4
    for (int k = 0; k <= 4; ++k) {
        const double quad = integrate(
            [&](double x) {
                return std::pow(1.0 + 0.09 - 0.6 * std::cos(x), k) / (2.0 * M_PI);
            },
            0.0, 2.0 * M_PI);
        CHECK(asd_moment(law, k) == doctest::Approx(quad).epsilon(1e-9));
    }
    // spectral-average oracle: the perturbed Toeplitz eigenvalues are an
    // explicit ESD whose moments converge to the law's moments
    const int n = 5000;
    for (int k = 1; k <= 4; ++k) {
        double avg = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double l = 1.09 - 0.6 * std::cos(j * M_PI / (n + 1));
            avg += std::pow(l, k);
        }
        avg /= n;
        CHECK(std::abs(avg - asd_moment(law, k)) < 5e-3);
    }
}

TEST_CASE("sine_kernel_G: closed form vs quadrature") {
    CHECK(sine_kernel_G(1.25, 1, 1) == doctest::Approx(1.0).epsilon(1e-9));
    const double quad11 = integrate(
        [](double x) { return std::sin(x) * std::sin(x) / (1.25 + std::cos(x)) / M_PI; }, 0.0,
        2.0 * M_PI);
    CHECK(sine_kernel_G(1.25, 1, 1) == doctest::Approx(quad11).epsilon(1e-9));

    for (double a : {1.5, -1.25, -2.0}) {
        for (auto [k1, k2] : {std::pair<int, int>{1, 2}, {2, 2}, {3, 1}}) {
            const double quad = integrate(
                [&](double x) { return std::sin(k1 * x) * std::sin(k2 * x) / (a + std::cos(x)) / M_PI; },
                0.0, 2.0 * M_PI);
            CHECK(sine_kernel_G(a, k1, k2) == doctest::Approx(quad).epsilon(1e-9));
        }
    }
    // decay as |a| grows
    CHECK(std::abs(sine_kernel_G(1e6, 2, 2)) < 1e-5);
    CHECK_THROWS_AS(sine_kernel_G(0.5, 1, 1), std::domain_error);
}

TEST_CASE("chebyshev_U: recurrence roots and product formula") {
    CHECK(chebyshev_U(0, 0.77) == doctest::Approx(1.0));
    CHECK(chebyshev_U(1, 0.77) == doctest::Approx(1.54));
    CHECK(chebyshev_U(2, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
    // U_5(x) = 2^5 prod_{k=1..5} (x - cos(k pi / 6))
    const double x = 0.3;
    double prod = 32.0;
    for (int k = 1; k <= 5; ++k) prod *= (x - std::cos(k * M_PI / 6.0));
    CHECK(chebyshev_U(5, x) == doctest::Approx(prod).epsilon(1e-12));
}

TEST_CASE("det_bordered_tridiag: small cases and dense oracle") {
    // f = g = 0, nn = 2: det [[2x, 1], [1, 2x]] = 4x^2 - 1
    for (double x : {0.2, 0.9, -1.3})
        CHECK(det_bordered_tridiag(x, 0.0, 0.0, 2) == doctest::Approx(4 * x * x - 1).epsilon(1e-12));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const double x = unif(rng), f = unif(rng), g = unif(rng);
        const int nn = 2 + static_cast<int>(rng() % 7); // up to 8
        Matrix m(nn, nn);
        for (int i = 0; i < nn; ++i) m(i, i) = 2.0 * x;
        m(0, 0) += f;
        m(nn - 1, nn - 1) += g;
        for (int i = 0; i + 1 < nn; ++i) {
            m(i, i + 1) = 1.0;
            m(i + 1, i) = 1.0;
        }
        CHECK(det_bordered_tridiag(x, f, g, nn) ==
              doctest::Approx(dense_determinant(m)).epsilon(1e-10));
    }
}

TEST_CASE("tridiagonalize preserves the spectrum of a dense symmetric matrix") {
    CoefficientSchedule s(0.3, {{10, 1, 0.2}});
    const auto T = precision_matrix(s, 40);
    // rebuild from a dense copy: spectra must match exactly up to roundoff
    const auto T2 = tridiagonalize(T.to_dense());
    const auto a = eigenvalues_symtridiag(T).eigenvalues;
    const auto b = eigenvalues_symtridiag(T2).eigenvalues;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("Weyl interlacing for the rank-two single-change perturbation") {
    const int n = 400;
    CoefficientSchedule scm(0.3, {{200, 1, 0.2}});
    CoefficientSchedule null_model(0.3);
    const auto evB = eigenvalues_symtridiag(precision_matrix(scm, n)).eigenvalues;
    const auto evA = eigenvalues_symtridiag(precision_matrix(null_model, n)).eigenvalues;
    for (int j = 2; j <= n - 1; ++j) {
        CHECK(evA[static_cast<std::size_t>(j - 2)] <= evB[static_cast<std::size_t>(j - 1)] + 1e-10);
        CHECK(evB[static_cast<std::size_t>(j - 1)] <= evA[static_cast<std::size_t>(j)] + 1e-10);
    }
}

TEST_CASE("spectrum and histogram CSV exports") {
    Spectrum s;
    s.eigenvalues = {0.5, 1.0, 1.5};
    std::istringstream csv(spectrum_to_csv(s));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "index,eigenvalue");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3);

    std::istringstream hist(histogram_to_csv(s.eigenvalues, 2));
    REQUIRE(std::getline(hist, line));
    CHECK(line == "bin_left,bin_right,count");
    int total = 0, bins = 0;
    while (std::getline(hist, line)) {
        ++bins;
        total += std::stoi(line.substr(line.rfind(',') + 1));
    }
    CHECK(bins == 2);
    CHECK(total == 3);
}
