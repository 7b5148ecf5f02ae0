#include "typent/coulomb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "typent/errors.hpp"

namespace typent::coulomb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_singular(std::span<const double> lambda, int alpha) {
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (alpha > 0 && !(lambda[i] > 0.0)) return true;
        for (std::size_t j = i + 1; j < lambda.size(); ++j)
            if (lambda[i] == lambda[j]) return true;
    }
    return false;
}

}  // namespace

double energy(std::span<const double> lambda, const EnergyParams& params) {
    const int alpha = params.dims.alpha();
    if (is_singular(lambda, alpha)) return kInf;
    double e = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        for (std::size_t j = i + 1; j < lambda.size(); ++j)
            e -= 2.0 * std::log(std::abs(lambda[i] - lambda[j]));
        if (alpha > 0) e -= alpha * std::log(lambda[i]);
        sum += lambda[i];
        sum_sq += lambda[i] * lambda[i];
    }
    if (params.xi != 0.0) e -= params.xi * (1.0 - sum);
    if (params.eta != 0.0) e -= params.eta * (params.purity - sum_sq);
    return e;
}

double energy(const Spectrum& spectrum, const EnergyParams& params) {
    return energy(spectrum.values(), params);
}

std::vector<double> gradient(std::span<const double> lambda, const EnergyParams& params) {
    const std::size_t n = lambda.size();
    const int alpha = params.dims.alpha();
    if (is_singular(lambda, alpha)) return std::vector<double>(n, kInf);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double pair = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) pair += 1.0 / (lambda[i] - lambda[j]);
        g[i] = -2.0 * pair + params.xi + 2.0 * params.eta * lambda[i];
        if (alpha > 0) g[i] -= alpha / lambda[i];
    }
    return g;
}

linalg::Matrix hessian(std::span<const double> lambda, const EnergyParams& params) {
    const std::size_t n = lambda.size();
    const int alpha = params.dims.alpha();
    if (is_singular(lambda, alpha)) return linalg::Matrix(n, n, kInf);
    linalg::Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 2.0 * params.eta;
        if (alpha > 0) diag += alpha / (lambda[i] * lambda[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = lambda[i] - lambda[j];
            const double w = 2.0 / (d * d);
            h(i, j) = -w;
            diag += w;
        }
        h(i, i) = diag;
    }
    return h;
}

double hessian_trace_bound(const BipartitionDims& dims) {
    const double n = dims.n();
    const double m = dims.m();
    return n * n * n * (m - n) + 2.0 * n * (n - 1.0) * m;
}

double hessian_trace_asymptotic(const BipartitionDims& dims) {
    const double n = dims.n();
    const double m = dims.m();
    return n * n * n * (m - n) + 0.5 * n * n * n * (n - 1.0) * m;
}

long long multiplier_xi(const BipartitionDims& dims) {
    return static_cast<long long>(dims.n()) * (dims.m() - 1);
}

double trace_inverse(const BipartitionDims& dims) {
    if (dims.balanced())
        throw DomainError("tr rho^-1 diverges for a balanced bipartition (m == n)");
    const double n = dims.n();
    return n * n * (dims.m() - 1.0) / dims.alpha();
}

double virial_residual(const SaddleSolution& solution) {
    // Only meaningful on the interior: drop the zero of a reduced balanced solution.
    std::vector<double> lambda;
    for (double v : solution.spectrum.values())
        if (v > 0.0) lambda.push_back(v);
    const int n = static_cast<int>(lambda.size());
    const int m = solution.dims.m() + (solution.dims.n() - n);
    const BipartitionDims dims(n, m);
    const auto g = gradient(lambda, EnergyParams{dims, solution.eta, solution.xi});
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += lambda[i] * (-g[i]);
    return s;
}

namespace {

struct Manifold {
    int n;
    std::optional<double> purity;

    // Exact projection onto {sum = 1, sum sq = purity}, or rescaling onto the
    // simplex plane, which preserves positivity.
    void project(std::vector<double>& x) const {
        if (purity) {
            const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
            double norm2 = 0.0;
            for (double& v : x) {
                v -= mean;
                norm2 += v * v;
            }
            const double radius = std::sqrt(*purity - 1.0 / n);
            const double f = radius / std::sqrt(norm2);
            for (double& v : x) v = 1.0 / n + f * v;
        } else {
            const double sum = std::accumulate(x.begin(), x.end(), 0.0);
            for (double& v : x) v /= sum;
        }
    }

    int constraint_count() const { return purity ? 2 : 1; }
};

bool strictly_descending(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i - 1] > x[i])) return false;
    return true;
}

struct MultiplierFit {
    double xi;
    double eta;
    double max_residual;
};

// Least-squares multipliers for g + xi * 1 + eta * 2 lambda = 0.
MultiplierFit fit_multipliers(const std::vector<double>& g, const std::vector<double>& lambda,
                              bool constrained) {
    const std::size_t n = g.size();
    double xi = 0.0;
    double eta = 0.0;
    if (!constrained) {
        xi = -std::accumulate(g.begin(), g.end(), 0.0) / n;
    } else {
        double s1 = 0.0, s2 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s1 += 2.0 * lambda[i];
            s2 += 4.0 * lambda[i] * lambda[i];
            g1 += g[i];
            g2 += 2.0 * lambda[i] * g[i];
        }
        const double det = n * s2 - s1 * s1;
        xi = -(s2 * g1 - s1 * g2) / det;
        eta = -(n * g2 - s1 * g1) / det;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(g[i] + xi + 2.0 * eta * lambda[i]));
    return {xi, eta, worst};
}

std::vector<double> initial_point(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 / n + 1e-3 * (0.5 * (n - 1) - i) / n;
    return x;
}

SaddleSolution solve_interior(const BipartitionDims& dims, std::optional<double> purity,
                              std::optional<Spectrum> init, const SolveOptions& options) {
    const int n = dims.n();
    const Manifold manifold{n, purity};
    const EnergyParams bare{dims};

    std::vector<double> x;
    if (init) {
        if (static_cast<int>(init->size()) != n)
            throw DimensionError("solve_saddle_numeric: init has the wrong length");
        x.assign(init->values().begin(), init->values().end());
    } else {
        x = initial_point(n);
    }
    manifold.project(x);
    if (!strictly_descending(x) || !std::isfinite(energy(x, bare)))
        throw DomainError("solve_saddle_numeric: initial point must have distinct entries");

    MultiplierFit fit{};
    double f = energy(x, bare);
    int iter = 0;
    for (;; ++iter) {
        const auto g = gradient(x, bare);
        fit = fit_multipliers(g, x, purity.has_value());
        if (fit.max_residual <= options.force_tolerance * std::max(std::abs(fit.xi), 1.0)) break;
        if (iter >= options.max_iterations)
            throw ConvergenceError(
                fmt::format("saddle solver: no convergence in {} iterations (residual {:.3e})",
                            options.max_iterations, fit.max_residual),
                fit.max_residual);

        // Newton step on the Lagrangian with linearized constraints.
        const int p = manifold.constraint_count();
        linalg::Matrix kkt(n + p, n + p);
        const auto h = hessian(x, EnergyParams{dims, fit.eta, 0.0});
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) kkt(i, j) = h(i, j);
            kkt(i, n) = kkt(n, i) = 1.0;
            if (purity) kkt(i, n + 1) = kkt(n + 1, i) = 2.0 * x[i];
        }
        std::vector<double> rhs(n + p, 0.0);
        for (int i = 0; i < n; ++i) rhs[i] = -g[i];
        rhs[n] = 1.0 - std::accumulate(x.begin(), x.end(), 0.0);
        if (purity) {
            double sq = 0.0;
            for (double v : x) sq += v * v;
            rhs[n + 1] = *purity - sq;
        }
        const auto sol = linalg::solve(kkt, rhs);

        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
            std::vector<double> cand(n);
            for (int i = 0; i < n; ++i) cand[i] = x[i] + t * sol[i];
            manifold.project(cand);
            if (!strictly_descending(cand)) continue;
            const double fc = energy(cand, bare);
            if (!std::isfinite(fc)) continue;
            if (fc <= f + 1e-13 * std::max(1.0, std::abs(f))) {
                x = std::move(cand);
                f = fc;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw ConvergenceError(
                fmt::format("saddle solver: line search failed (residual {:.3e})",
                            fit.max_residual),
                fit.max_residual);
    }

    if (purity && !(x.back() > 0.0))
        throw FeasibilityError(fmt::format(
            "purity {} has no interior most-probable spectrum for n = {} (smallest "
            "eigenvalue {:.3e})",
            *purity, n, x.back()));

    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    ConstraintResiduals residuals{std::abs(sum - 1.0), std::nullopt};
    if (purity) {
        double sq = 0.0;
        for (double v : x) sq += v * v;
        residuals.purity = std::abs(sq - *purity);
    }
    const bool definite = linalg::is_positive_definite(hessian(x, EnergyParams{dims, fit.eta, 0.0}));
    return SaddleSolution{dims,
                          Spectrum::from_eigenvalues(std::move(x), kClampTolerance),
                          fit.xi,
                          fit.eta,
                          fit.max_residual,
                          residuals,
                          definite,
                          iter};
}

}  // namespace

SaddleSolution solve_saddle_numeric(const BipartitionDims& dims, std::optional<double> purity_target,
                                    std::optional<Spectrum> init, const SolveOptions& options) {
    const int n = dims.n();
    if (purity_target) {
        const double p = *purity_target;
        if (!(p > 1.0 / n && p <= 1.0))
            throw FeasibilityError(
                fmt::format("purity target {} outside (1/n, 1] for n = {}", p, n));
        return solve_interior(dims, purity_target, std::move(init), options);
    }

    if (n == 1) {
        // Single charge: the force balance fixes xi = alpha.
        return SaddleSolution{dims, Spectrum({1.0}), static_cast<double>(dims.alpha()), 0.0, 0.0,
                              ConstraintResiduals{0.0, std::nullopt}, dims.alpha() > 0, 0};
    }

    if (dims.balanced()) {
        // One charge sits at the origin; the rest solve the (n-1, n+1) problem.
        std::optional<Spectrum> reduced_init;
        if (init) {
            std::vector<double> head(init->values().begin(), init->values().end() - 1);
            const double s = std::accumulate(head.begin(), head.end(), 0.0);
            for (double& v : head) v /= s;
            reduced_init = Spectrum::from_eigenvalues(std::move(head), kClampTolerance);
        }
        auto reduced = solve_saddle_numeric(BipartitionDims(n - 1, n + 1), std::nullopt,
                                            std::move(reduced_init), options);
        std::vector<double> values(reduced.spectrum.values().begin(),
                                   reduced.spectrum.values().end());
        values.push_back(0.0);
        reduced.spectrum = Spectrum::from_eigenvalues(std::move(values), kClampTolerance);
        reduced.dims = dims;
        return reduced;
    }

    return solve_interior(dims, std::nullopt, std::move(init), options);
}

nlohmann::json to_json(const SaddleSolution& s) {
    nlohmann::json residuals = {{"trace", s.constraint_residuals.trace}};
    residuals["purity"] = s.constraint_residuals.purity
                              ? nlohmann::json(*s.constraint_residuals.purity)
                              : nlohmann::json(nullptr);
    return nlohmann::json{{"n", s.dims.n()},
                          {"m", s.dims.m()},
                          {"eta", s.eta},
                          {"xi", s.xi},
                          {"spectrum", typent::to_json(s.spectrum)},
                          {"force_residual", s.max_force_residual},
                          {"constraint_residuals", residuals},
                          {"hessian_definite", s.hessian_definite}};
}

}  // namespace typent::coulomb
