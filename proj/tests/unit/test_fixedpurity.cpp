#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "typent/coulomb.hpp"
#include "typent/errors.hpp"
#include "typent/fixedpurity.hpp"
#include "typent/orthopoly.hpp"

using namespace typent;
using namespace typent::fixedpurity;

TEST_CASE("eta and purity maps") {
    CHECK(eta_from_purity(2, 0.625) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(eta_from_purity(2, 1.0) == 2.0);
    for (int n : {2, 3, 10, 100}) {
        CHECK(eta_from_purity(n, 1.0) == doctest::Approx(n * n / 2.0).epsilon(1e-15));
        for (double t : {0.01, 0.2, 0.5, 0.9, 1.0}) {
            const double p = 1.0 / n + t * (1.0 - 1.0 / n);
            const double eta = eta_from_purity(n, p);
            CHECK(eta >= n * n / 2.0 * (1 - 1e-15));
            CHECK(std::abs(purity_from_eta(n, eta) - p) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(eta_from_purity(2, 0.5), DomainError);
    CHECK_THROWS_AS(eta_from_purity(2, 1.5), DomainError);
    CHECK_THROWS_AS(purity_from_eta(2, 0.0), DomainError);
    CHECK_THROWS_AS(eta_from_purity(1, 1.0), DomainError);
}

TEST_CASE("isopurity problem accessors") {
    const auto p = IsopurityProblem::from_purity(2, 0.625);
    CHECK(p.eta() == doctest::Approx(8.0));
    CHECK(p.beta() == doctest::Approx(1.0));
    CHECK(p.xi() == doctest::Approx(-8.0));
    const auto q = IsopurityProblem::from_beta(4, 2.0);
    CHECK(q.eta() == 128.0);
    CHECK(q.purity_target() == doctest::Approx(purity_from_eta(4, 128.0)));
    CHECK(IsopurityProblem::from_eta(3, 20.0).purity_target() == doctest::Approx(1.0 / 3 + 6.0 / 40));
}

TEST_CASE("solve isopurity: N = 2 examples") {
    const auto s = solve_isopurity(IsopurityProblem::from_eta(2, 8.0));
    CHECK(s.feasible);
    CHECK(s.eigenvalues[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.purity == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(s.spectrum()[0] == doctest::Approx(0.75));

    const auto wide = solve_isopurity(IsopurityProblem::from_eta(2, 1e12));
    CHECK(wide.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(wide.purity == doctest::Approx(0.5).epsilon(1e-10));

    const auto bad = solve_isopurity(IsopurityProblem::from_eta(2, 1.0));
    CHECK_FALSE(bad.feasible);
    CHECK(bad.min_eigenvalue < 0.0);
    CHECK_THROWS_AS(bad.spectrum(), FeasibilityError);
}

TEST_CASE("solve isopurity: beta = 2 sits at the spectral edge") {
    const int n = 200;
    const auto s = solve_isopurity(IsopurityProblem::from_beta(n, 2.0));
    CHECK(s.feasible);
    CHECK(n * s.min_eigenvalue >= 0.0);
    CHECK(n * s.min_eigenvalue < 0.1);
}

TEST_CASE("critical threshold") {
    for (int n : {2, 5, 50}) {
        const auto t = critical_threshold(n);
        CHECK(t.beta_plus == 2.0);
        CHECK(t.purity_critical == doctest::Approx(5.0 / (4 * n)));
    }
    const auto t2 = critical_threshold(2);
    CHECK(t2.eta_plus == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(t2.beta_plus_finite == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(t2.purity_at_eta_plus == doctest::Approx(1.0).epsilon(1e-9));

    // Independent check: the smallest zero of H_N(sqrt(eta)(x - 1/N)) reaches 0
    // when sqrt(eta) / N = -sigma_N.
    const int n = 200;
    const auto t = critical_threshold(n);
    const double sigma = orthopoly::hermite_zeros({n, 0.0, 1.0}).front();
    const double eta_ref = (n * sigma) * (n * sigma);
    CHECK(t.eta_plus == doctest::Approx(eta_ref).epsilon(1e-8));
    CHECK(std::abs(t.beta_plus_finite - 2.0) <= 0.2);
    CHECK_THROWS_AS(critical_threshold(1), DomainError);
}

TEST_CASE("multiplier relations") {
    const auto p = IsopurityProblem::from_eta(2, 8.0);
    const auto r = multiplier_relation_check(p, solve_isopurity(p));
    CHECK(r.xi_relation_residual <= 1e-15);
    CHECK(r.max_force_residual <= 1e-14);

    for (double eta : {1e3, 1e6, 1e9}) {
        const auto q = IsopurityProblem::from_eta(5, eta);
        const auto rr = multiplier_relation_check(q, solve_isopurity(q));
        CHECK(rr.xi_relation_residual <= 1e-8);
        CHECK(rr.max_force_residual <= 1e-8);
    }

    const auto p3 = IsopurityProblem::from_purity(3, 0.4);
    const auto r3 = multiplier_relation_check(p3, solve_isopurity(p3));
    CHECK(r3.max_force_residual <= 1e-8);
}

TEST_CASE("property: feasible solutions satisfy both constraints") {
    for (int n = 2; n <= 60; n += 3) {
        const double eta_plus = critical_threshold(n).eta_plus;
        for (double factor : {1.01, 1.5, 4.0, 100.0}) {
            const auto p = IsopurityProblem::from_eta(n, factor * eta_plus);
            const auto s = solve_isopurity(p);
            REQUIRE(s.feasible);
            const double sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            CHECK(std::abs(s.purity - purity_from_eta(n, p.eta())) <= 1e-10);
        }
        const auto below = solve_isopurity(IsopurityProblem::from_eta(n, 0.9 * eta_plus));
        CHECK_FALSE(below.feasible);
    }
}

TEST_CASE("property: monotone in eta") {
    for (int n : {3, 8, 21}) {
        const auto rows = threshold_scan(n, n * n / 2.0, 50.0 * n * n * n, 40);
        REQUIRE(rows.size() == 40);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].eta > rows[i - 1].eta);
            CHECK(rows[i].purity < rows[i - 1].purity);
            CHECK(rows[i].min_eigenvalue > rows[i - 1].min_eigenvalue);
        }
    }
}

TEST_CASE("property: numeric oracle reproduces the hermite spectra") {
    for (int n = 2; n <= 10; ++n) {
        const auto t = critical_threshold(n);
        int checked = 0;
        for (int i = 0; i < 20; ++i) {
            // Feasible targets between 1/n and the finite-n critical purity.
            const double frac = (i + 0.5) / 20.0;
            const double purity = 1.0 / n + frac * 0.98 * (t.purity_at_eta_plus - 1.0 / n);
            const auto p = IsopurityProblem::from_purity(n, purity);
            const auto s = solve_isopurity(p);
            REQUIRE(s.feasible);
            const auto numeric = coulomb::solve_saddle_numeric(BipartitionDims(n, n), purity);
            for (int k = 0; k < n; ++k) CHECK(std::abs(numeric.spectrum[k] - s.eigenvalues[k]) <= 1e-9);
            CHECK(numeric.eta == doctest::Approx(p.eta()).epsilon(1e-6));
            ++checked;
        }
        CHECK(checked == 20);
    }
}

TEST_CASE("threshold scan csv") {
    const auto csv = threshold_scan_csv(threshold_scan(3, 5.0, 500.0, 5));
    CHECK(csv.rfind("n,eta,beta,purity,min_eigenvalue,feasible\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK_THROWS_AS(threshold_scan(3, 5.0, 500.0, 0), DomainError);
}
