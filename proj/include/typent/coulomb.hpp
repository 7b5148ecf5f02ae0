#pragma once

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "typent/core.hpp"
#include "typent/linalg.hpp"

namespace typent::coulomb {

/// Multipliers of the constrained log-gas energy
///   E = -2 sum_{i<j} ln|l_i - l_j| - (m - n) sum ln l_i
///       - xi (1 - sum l_i) - eta (purity - sum l_i^2).
/// eta = 0 is the unbiased problem.
struct EnergyParams {
    BipartitionDims dims;
    double eta = 0.0;
    double xi = 0.0;
    double purity = 0.0;  // only enters the constant of the eta term
};

/// E at an arbitrary point (not required to lie on the simplex). Returns
/// +inf at coincident eigenvalues, and at nonpositive ones when m > n.
double energy(std::span<const double> lambda, const EnergyParams& params);
double energy(const Spectrum& spectrum, const EnergyParams& params);

/// dE/dl_i including the multiplier terms. All entries +inf where energy is.
std::vector<double> gradient(std::span<const double> lambda, const EnergyParams& params);

/// Second derivatives of E. The off-diagonal entries are -2/(l_i - l_j)^2,
/// the exact derivative of the pair term; eta adds 2 eta to the diagonal.
/// Entries are +inf where the energy is.
linalg::Matrix hessian(std::span<const double> lambda, const EnergyParams& params);

/// Upper bound N^3 (M - N) + 2 N (N - 1) M on the Hessian trace at the typical
/// spectrum, derived for a small subsystem in a large environment.
double hessian_trace_bound(const BipartitionDims& dims);

/// Leading large-M behaviour of the Hessian trace at the typical spectrum,
/// N^3 (M - N) + N^3 (N - 1) M / 2. Coincides with hessian_trace_bound to
/// leading order only for N = 2; for N > 2 the pair part is larger.
double hessian_trace_asymptotic(const BipartitionDims& dims);

/// xi = N (M - 1), the trace multiplier of the unbiased saddle point.
long long multiplier_xi(const BipartitionDims& dims);

/// tr rho^-1 = N^2 (M - 1) / (M - N) at the typical spectrum. Throws
/// DomainError for a balanced bipartition, where it diverges.
double trace_inverse(const BipartitionDims& dims);

struct ConstraintResiduals {
    double trace;                  // |sum l - 1|
    std::optional<double> purity;  // |sum l^2 - target| when constrained
};

struct SaddleSolution {
    BipartitionDims dims;
    Spectrum spectrum;
    double xi;
    double eta;
    double max_force_residual;
    ConstraintResiduals constraint_residuals;
    bool hessian_definite;
    int iterations;
};

/// sum_i l_i * force_i, which for an exact solution equals
/// N (N - 1) + N (M - N) - xi. Returns that combination, so zero at a
/// solution.
double virial_residual(const SaddleSolution& solution);

struct SolveOptions {
    int max_iterations = 500;
    double force_tolerance = 1e-10;  // relative to max(|xi|, 1)
};

/// Independent minimizer of the log-gas energy on the open simplex, or on its
/// intersection with the sphere sum l^2 = purity_target. Newton steps on the
/// constraint manifold with multipliers fitted by least squares, step halving
/// against the +inf barrier, and exact re-projection after every step.
/// Balanced unconstrained problems are reduced to (n - 1, n + 1) plus a zero
/// eigenvalue.
///
/// Throws FeasibilityError for purity targets outside (1/n, 1] or whose
/// minimizer leaves the positive orthant, ConvergenceError after
/// max_iterations.
SaddleSolution solve_saddle_numeric(const BipartitionDims& dims,
                                    std::optional<double> purity_target = std::nullopt,
                                    std::optional<Spectrum> init = std::nullopt,
                                    const SolveOptions& options = {});

nlohmann::json to_json(const SaddleSolution& solution);

}  // namespace typent::coulomb
