#include "typent/fixedpurity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "typent/errors.hpp"
#include "typent/orthopoly.hpp"

namespace typent::fixedpurity {

double eta_from_purity(int n, double purity) {
    if (n < 2) throw DomainError("isopurity problems need n >= 2");
    if (!(purity > 1.0 / n && purity <= 1.0))
        throw DomainError(fmt::format("purity {} outside (1/N, 1] for N = {}", purity, n));
    const double nn = n;
    return nn * nn * (nn - 1.0) / (2.0 * (nn * purity - 1.0));
}

double purity_from_eta(int n, double eta) {
    if (n < 2) throw DomainError("isopurity problems need n >= 2");
    if (!(eta > 0.0)) throw DomainError(fmt::format("eta must be positive (got {})", eta));
    const double nn = n;
    return 1.0 / nn + nn * (nn - 1.0) / (2.0 * eta);
}

IsopurityProblem IsopurityProblem::from_purity(int n, double purity) {
    return IsopurityProblem(n, purity, eta_from_purity(n, purity));
}

IsopurityProblem IsopurityProblem::from_eta(int n, double eta) {
    return IsopurityProblem(n, purity_from_eta(n, eta), eta);
}

IsopurityProblem IsopurityProblem::from_beta(int n, double beta) {
    if (!(beta > 0.0)) throw DomainError(fmt::format("beta must be positive (got {})", beta));
    const double nn = n;
    return from_eta(n, beta * nn * nn * nn);
}

Spectrum FixedPuritySolution::spectrum() const {
    if (!feasible)
        throw FeasibilityError(fmt::format(
            "isopurity solution is unphysical (smallest eigenvalue {:.6e})", min_eigenvalue));
    return Spectrum::from_eigenvalues(eigenvalues, kClampTolerance);
}

FixedPuritySolution solve_isopurity(const IsopurityProblem& problem) {
    const int n = problem.n();
    auto zeros = orthopoly::hermite_zeros(
        {n, 1.0 / n, std::sqrt(problem.eta())});
    std::sort(zeros.begin(), zeros.end(), std::greater<>());
    double sq = 0.0;
    for (double z : zeros) sq += z * z;
    const double min_ev = zeros.back();
    return FixedPuritySolution{std::move(zeros), min_ev > 0.0, min_ev, sq,
                               std::abs(sq - problem.purity_target())};
}

namespace {

double smallest_zero(int n, double eta) {
    return orthopoly::hermite_zeros({n, 1.0 / n, std::sqrt(eta)}).front();
}

}  // namespace

CriticalThreshold critical_threshold(int n) {
    if (n < 2) throw DomainError("critical_threshold: n must be >= 2");
    const double nn = n;

    // Bracket the sign change of the smallest zero, which increases with eta.
    double lo = nn * nn / 2.0;
    while (smallest_zero(n, lo) > 0.0) lo *= 0.5;
    double hi = lo * 2.0;
    while (smallest_zero(n, hi) <= 0.0) hi *= 2.0;
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (smallest_zero(n, mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double eta_plus = 0.5 * (lo + hi);
    return CriticalThreshold{2.0, 5.0 / (4.0 * nn), eta_plus, eta_plus / (nn * nn * nn),
                             purity_from_eta(n, eta_plus)};
}

MultiplierReport multiplier_relation_check(const IsopurityProblem& problem,
                                           const FixedPuritySolution& solution) {
    const int n = problem.n();
    const double eta = problem.eta();
    const double xi = problem.xi();
    const auto& x = solution.eigenvalues;
    const double relation = std::abs(xi + 2.0 * eta * solution.purity - n * (n - 1.0));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double pair = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) pair += 1.0 / (x[i] - x[j]);
        worst = std::max(worst, std::abs(-2.0 * eta * x[i] + 2.0 * pair - xi));
    }
    return {relation / std::abs(xi), worst / std::abs(xi)};
}

std::vector<ScanRow> threshold_scan(int n, double eta_lo, double eta_hi, int points) {
    if (!(eta_lo > 0.0 && eta_hi >= eta_lo) || points < 1)
        throw DomainError("threshold_scan: need 0 < eta_lo <= eta_hi and points >= 1");
    std::vector<ScanRow> rows;
    const double nn = n;
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        const double eta = eta_lo * std::pow(eta_hi / eta_lo, t);
        const auto problem = IsopurityProblem::from_eta(n, eta);
        const auto sol = solve_isopurity(problem);
        rows.push_back({n, eta, eta / (nn * nn * nn), problem.purity_target(), sol.min_eigenvalue,
                        sol.feasible});
    }
    return rows;
}

std::string threshold_scan_csv(const std::vector<ScanRow>& rows) {
    std::string out = "n,eta,beta,purity,min_eigenvalue,feasible\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{}\n", r.n, format_double(r.eta), format_double(r.beta),
                           format_double(r.purity), format_double(r.min_eigenvalue),
                           r.feasible ? "true" : "false");
    return out;
}

}  // namespace typent::fixedpurity
