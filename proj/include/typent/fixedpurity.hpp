#pragma once

#include <string>
#include <vector>

#include "typent/core.hpp"

namespace typent::fixedpurity {

/// eta = N^2 (N - 1) / (2 (N purity - 1)). Throws DomainError unless
/// 1/N < purity <= 1.
double eta_from_purity(int n, double purity);

/// purity = 1/N + N (N - 1) / (2 eta). Throws DomainError unless eta > 0.
double purity_from_eta(int n, double eta);

/// Most-probable spectrum on an isopurity manifold of a balanced (M = N)
/// bipartition. eta labels the manifold; beta = eta / N^3 is the canonical
/// inverse temperature and xi = -2 eta / N the trace multiplier.
class IsopurityProblem {
public:
    static IsopurityProblem from_purity(int n, double purity);
    static IsopurityProblem from_eta(int n, double eta);
    static IsopurityProblem from_beta(int n, double beta);

    int n() const noexcept { return n_; }
    double purity_target() const noexcept { return purity_; }
    double eta() const noexcept { return eta_; }
    double beta() const noexcept { return eta_ / (static_cast<double>(n_) * n_ * n_); }
    double xi() const noexcept { return -2.0 * eta_ / n_; }

private:
    IsopurityProblem(int n, double purity, double eta) : n_(n), purity_(purity), eta_(eta) {}

    int n_;
    double purity_;
    double eta_;
};

struct FixedPuritySolution {
    std::vector<double> eigenvalues;  // non-increasing; may be negative
    bool feasible;                    // smallest eigenvalue > 0
    double min_eigenvalue;
    double purity;                    // sum of squares of the eigenvalues
    double purity_residual;           // |purity - target|

    /// Throws FeasibilityError when the zero set is not a probability vector.
    Spectrum spectrum() const;
};

/// Zeros of H_N(sqrt(eta) (x - 1/N)). Infeasible problems still return their
/// zero set, with feasible = false.
FixedPuritySolution solve_isopurity(const IsopurityProblem& problem);

struct CriticalThreshold {
    double beta_plus;          // large-N value, 2
    double purity_critical;    // large-N value, 5 / (4N)
    double eta_plus;           // finite-N threshold by bisection
    double beta_plus_finite;   // eta_plus / N^3
    double purity_at_eta_plus; // purity_from_eta(N, eta_plus)
};

/// Asymptotic threshold plus the exact finite-N eta at which the smallest
/// Hermite zero crosses 0, bisected to a relative bracket of 1e-10.
CriticalThreshold critical_threshold(int n);

struct MultiplierReport {
    double xi_relation_residual;  // |xi + 2 eta pi - N (N - 1)| / |xi|
    double max_force_residual;    // max_i |force_i| / |xi|
};

/// Checks xi = N (N - 1) - 2 eta pi and the force balance
/// -2 eta l_i + 2 sum_{j != i} 1/(l_i - l_j) - xi = 0 at the solution.
MultiplierReport multiplier_relation_check(const IsopurityProblem& problem,
                                           const FixedPuritySolution& solution);

struct ScanRow {
    int n;
    double eta;
    double beta;
    double purity;
    double min_eigenvalue;
    bool feasible;
};

/// Solutions at `points` geometrically spaced eta values in [eta_lo, eta_hi].
std::vector<ScanRow> threshold_scan(int n, double eta_lo, double eta_hi, int points);

/// CSV with header n,eta,beta,purity,min_eigenvalue,feasible.
std::string threshold_scan_csv(const std::vector<ScanRow>& rows);

}  // namespace typent::fixedpurity
