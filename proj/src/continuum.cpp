#include "typent/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "typent/core.hpp"
#include "typent/errors.hpp"
#include "typent/fixedpurity.hpp"

namespace typent::continuum {
namespace {

using std::numbers::pi;
using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr unsigned kMaxDepth = 20;

// lambda(theta) = c - h cos(theta) maps [0, pi] onto the support.
struct AngleMap {
    double c;
    double h;

    explicit AngleMap(const ContinuumDensity& d)
        : c(0.5 * (d.lambda_minus + d.lambda_plus)), h(0.5 * (d.lambda_plus - d.lambda_minus)) {}

    double lambda(double theta) const { return c - h * std::cos(theta); }
    double jacobian(double theta) const { return h * std::sin(theta); }
    double theta(double lambda) const { return std::acos(std::clamp((c - lambda) / h, -1.0, 1.0)); }
};

// sigma(lambda(theta)) * lambda'(theta) in closed form; finite at both ends,
// including the Marchenko-Pastur hard edge.
double angular_weight(const ContinuumDensity& d, double theta) {
    if (d.kind == DensityKind::semicircle) {
        const double h = 0.5 * (d.lambda_plus - d.lambda_minus);
        const double s = std::sin(theta);
        return d.beta / pi * h * h * s * s;
    }
    return (1.0 + std::cos(theta)) / pi;
}

template <class F>
double integrate_checked(F f, double a, double b, double tolerance, const char* what) {
    double error = 0.0;
    const double value = Quadrature::integrate(f, a, b, kMaxDepth, tolerance, &error);
    if (!(error <= tolerance * std::max(1.0, std::abs(value))))
        throw AccuracyError(fmt::format("{}: quadrature error {:.3e} above tolerance {:.1e}", what,
                                        error, tolerance),
                            value, error);
    return value;
}

}  // namespace

double CanonicalPotential::value(std::span<const double> lambda) const {
    const double nn = n;
    double sq = 0.0;
    double sum = 0.0;
    double logs = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        sq += lambda[j] * lambda[j];
        sum += lambda[j];
        for (std::size_t k = j + 1; k < lambda.size(); ++k)
            logs += std::log(std::abs(lambda[j] - lambda[k]));
    }
    return beta * nn * sq - 2.0 / (nn * nn) * logs + zeta * (sum - 1.0);
}

std::string to_string(DensityKind kind) {
    return kind == DensityKind::semicircle ? "semicircle" : "marchenko_pastur";
}

ContinuumDensity semicircle(double beta) {
    if (!(beta >= kBetaPlus))
        throw DomainError(fmt::format("semicircle law needs beta >= 2 (got {})", beta));
    const double half_width = std::sqrt(kBetaPlus / beta);
    return {DensityKind::semicircle, beta, 1.0 - half_width, 1.0 + half_width,
            1.0 + 1.0 / (2.0 * beta)};
}

ContinuumDensity marchenko_pastur() { return {DensityKind::marchenko_pastur, 0.0, 0.0, 4.0, 2.0}; }

double density_value(const ContinuumDensity& d, double lambda) {
    if (lambda < d.lambda_minus || lambda > d.lambda_plus) return 0.0;
    if (d.kind == DensityKind::semicircle)
        return d.beta / pi * std::sqrt(std::max(0.0, (lambda - d.lambda_minus) * (d.lambda_plus - lambda)));
    if (lambda == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt((4.0 - lambda) / lambda) / (2.0 * pi);
}

double cdf(const ContinuumDensity& d, double lambda) {
    if (lambda <= d.lambda_minus) return 0.0;
    if (lambda >= d.lambda_plus) return 1.0;
    if (d.kind == DensityKind::semicircle) {
        const double half_width = 0.5 * (d.lambda_plus - d.lambda_minus);
        const double t = (lambda - 0.5 * (d.lambda_plus + d.lambda_minus)) / half_width;
        return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / pi;
    }
    const double theta = 2.0 * std::asin(0.5 * std::sqrt(lambda));
    return (theta + std::sin(theta)) / pi;
}

Moments moments(const ContinuumDensity& d, double tolerance) {
    const AngleMap map(d);
    auto weighted = [&](int power) {
        return [&, power](double theta) {
            const double l = map.lambda(theta);
            return angular_weight(d, theta) * std::pow(l, power);
        };
    };
    return {integrate_checked(weighted(0), 0.0, pi, tolerance, "mass"),
            integrate_checked(weighted(1), 0.0, pi, tolerance, "mean"),
            integrate_checked(weighted(2), 0.0, pi, tolerance, "second moment")};
}

double principal_value(const ContinuumDensity& d, double mu) {
    if (!(mu > d.lambda_minus && mu < d.lambda_plus))
        throw DomainError(fmt::format("principal value needs mu strictly inside ({}, {}), got {}",
                                      d.lambda_minus, d.lambda_plus, mu));
    const AngleMap map(d);
    const double sigma_mu = density_value(d, mu);
    auto smooth = [&](double theta) {
        const double l = map.lambda(theta);
        const double diff = l - mu;
        if (diff == 0.0) return 0.0;
        return (angular_weight(d, theta) - sigma_mu * map.jacobian(theta)) / diff;
    };
    const double split = map.theta(mu);
    const double regular = integrate_checked(smooth, 0.0, split, 1e-12, "principal value") +
                           integrate_checked(smooth, split, pi, 1e-12, "principal value");
    return regular + sigma_mu * std::log((d.lambda_plus - mu) / (mu - d.lambda_minus));
}

double implied_zeta(const ContinuumDensity& d) {
    const double mid = 0.5 * (d.lambda_minus + d.lambda_plus);
    return -2.0 * (d.beta * mid + principal_value(d, mid));
}

double tricomi_residual(const ContinuumDensity& d, std::span<const double> grid) {
    for (double mu : grid)
        if (!(mu > d.lambda_minus && mu < d.lambda_plus))
            throw DomainError(fmt::format("grid point {} outside the support ({}, {})", mu,
                                          d.lambda_minus, d.lambda_plus));
    const double half_zeta = 0.5 * implied_zeta(d);
    double worst = 0.0;
    for (double mu : grid)
        worst = std::max(worst, std::abs(d.beta * mu + principal_value(d, mu) + half_zeta));
    return worst;
}

std::vector<double> interior_grid(const ContinuumDensity& d, int points) {
    std::vector<double> grid(points);
    const double width = d.lambda_plus - d.lambda_minus;
    for (int i = 0; i < points; ++i) grid[i] = d.lambda_minus + width * (i + 1.0) / (points + 1.0);
    return grid;
}

double ks_distance(std::span<const double> sorted_points, const ContinuumDensity& d) {
    const double n = static_cast<double>(sorted_points.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double f = cdf(d, sorted_points[i]);
        worst = std::max({worst, f - i / n, (i + 1) / n - f});
    }
    return worst;
}

std::vector<ConvergenceRow> finite_n_convergence(std::span<const int> n_list, double beta) {
    const auto target = semicircle(beta);
    std::vector<ConvergenceRow> rows;
    for (int n : n_list) {
        const auto problem = fixedpurity::IsopurityProblem::from_beta(n, beta);
        const auto solution = fixedpurity::solve_isopurity(problem);
        if (!solution.feasible)
            throw FeasibilityError(fmt::format(
                "eta = beta n^3 = {} is below the finite-n threshold for n = {}", problem.eta(), n));
        std::vector<double> points(solution.eigenvalues.rbegin(), solution.eigenvalues.rend());
        for (double& p : points) p *= n;
        rows.push_back({n, ks_distance(points, target)});
    }
    return rows;
}

EnergyScalingReport canonical_energy_scaling_check(int n, double beta) {
    const auto problem = fixedpurity::IsopurityProblem::from_beta(n, beta);
    const auto solution = fixedpurity::solve_isopurity(problem);
    if (!solution.feasible)
        throw FeasibilityError(fmt::format("(n = {}, beta = {}) is not feasible", n, beta));
    const double nn = n;
    const double n3_purity = nn * nn * nn * solution.purity;
    const double ratio = n3_purity / (nn * nn);
    const double expected = 1.0 + 1.0 / (2.0 * beta);
    return {n, beta, n3_purity, ratio, expected,
            ratio >= 0.5 * expected && ratio <= 2.0 * expected};
}

std::string density_csv(const ContinuumDensity& d, int points) {
    if (points < 2) throw DomainError("density_csv needs at least 2 points");
    std::string out = "lambda,density\n";
    for (int i = 0; i < points; ++i) {
        const double l = d.lambda_minus + (d.lambda_plus - d.lambda_minus) * i / (points - 1.0);
        out += fmt::format("{},{}\n", format_double(l), format_double(density_value(d, l)));
    }
    return out;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "n,ks_distance\n";
    for (const auto& r : rows) out += fmt::format("{},{}\n", r.n, format_double(r.ks_distance));
    return out;
}

}  // namespace typent::continuum
