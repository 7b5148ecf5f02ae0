#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace typent::continuum {

inline constexpr double kBetaPlus = 2.0;

enum class DensityKind { semicircle, marchenko_pastur };

std::string to_string(DensityKind kind);

/// Canonical-ensemble potential of a balanced bipartition,
///   V = beta N sum l^2 - (2 / N^2) sum_{j<k} ln|l_j - l_k| + zeta (sum l - 1),
/// whose multipliers map onto the isopurity problem by eta = beta N^3 and
/// xi = zeta N^2.
struct CanonicalPotential {
    int n;
    double beta;
    double zeta;

    double eta() const { return beta * n * n * n; }
    double xi() const { return zeta * n * n; }
    double value(std::span<const double> lambda) const;
};

/// Large-N density of rescaled eigenvalues mu = N lambda for a balanced
/// bipartition: semicircle for beta >= 2, Marchenko-Pastur for the unbiased
/// ensemble (beta = 0).
struct ContinuumDensity {
    DensityKind kind;
    double beta;
    double lambda_minus;
    double lambda_plus;
    double rescaled_purity;
};

/// Support 1 -+ sqrt(2 / beta), rescaled purity 1 + 1/(2 beta). Throws
/// DomainError for beta < 2.
ContinuumDensity semicircle(double beta);

/// Support (0, 4), rescaled purity 2.
ContinuumDensity marchenko_pastur();

/// Density value; 0 outside the support, +inf at the Marchenko-Pastur
/// hard edge.
double density_value(const ContinuumDensity& d, double lambda);

/// Closed-form cumulative distribution function.
double cdf(const ContinuumDensity& d, double lambda);

struct Moments {
    double mass;
    double mean;
    double second_moment;
};

/// Mass, mean and second moment by adaptive Gauss-Kronrod quadrature in the
/// angle lambda = c - h cos(theta), which removes the edge singularities.
/// Throws AccuracyError if the error estimate stays above the tolerance.
Moments moments(const ContinuumDensity& d, double tolerance = 1e-10);

/// Principal value of the integral of sigma(l) / (l - mu) for mu inside the
/// support, by singularity subtraction.
double principal_value(const ContinuumDensity& d, double mu);

/// Max deviation of beta mu + PV(mu) + zeta/2 from 0 over the grid, with zeta
/// fixed at the support midpoint. Throws DomainError if a grid point is not
/// strictly inside the support.
double tricomi_residual(const ContinuumDensity& d, std::span<const double> grid);

/// zeta implied by the density: -2 (beta * mid + PV(mid)).
double implied_zeta(const ContinuumDensity& d);

/// Evenly spaced interior points of the support, endpoints excluded.
std::vector<double> interior_grid(const ContinuumDensity& d, int points);

/// Sup distance between the empirical CDF of the ascending points and a
/// continuous CDF.
double ks_distance(std::span<const double> sorted_points, const ContinuumDensity& d);

struct ConvergenceRow {
    int n;
    double ks_distance;
};

/// For each n: the isopurity spectrum at eta = beta n^3, rescaled by n, and its
/// KS distance to the semicircle. Throws FeasibilityError if a spectrum is not
/// physical.
std::vector<ConvergenceRow> finite_n_convergence(std::span<const int> n_list, double beta);

struct EnergyScalingReport {
    int n;
    double beta;
    double n3_purity;        // N^3 * purity
    double ratio;            // N^3 * purity / N^2
    double expected_ratio;   // 1 + 1/(2 beta)
    bool within_bounds;      // ratio in [0.5, 2] * expected
};

/// Checks that N^3 purity is extensive (O(N^2)) along the Hermite solution.
EnergyScalingReport canonical_energy_scaling_check(int n, double beta);

/// 512-point CSV (lambda,density) over the support, endpoints included.
std::string density_csv(const ContinuumDensity& d, int points = 512);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace typent::continuum
