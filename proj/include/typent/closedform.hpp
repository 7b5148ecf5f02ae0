#pragma once

#include <string>
#include <vector>

#include "typent/core.hpp"

namespace typent::closedform {

/// ln C_{N,M}, the log of the normalization of the induced eigenvalue law.
double log_normalization(const BipartitionDims& dims);

/// <det rho^k> = C_{N,M} / C_{N,M+k}.
double det_moment(const BipartitionDims& dims, int k);
double log_det_moment(const BipartitionDims& dims, int k);

/// Exact averages over Haar-random pure states.
struct EnsembleMoments {
    BipartitionDims dims;
    double mean_lambda;        // 1/N
    double sigma_rms;          // Lubkin
    double mean_purity;        // (N + M) / (MN + 1)
    double mean_entropy;       // Page
    double normalization_log;  // ln C_{N,M}

    double det_moment(int k) const { return closedform::det_moment(dims, k); }

    /// Large-N forms at fixed mu = (M - N)/N.
    double sigma_rms_asymptotic() const;
    double mean_purity_asymptotic() const;
};

EnsembleMoments mean_moments(const BipartitionDims& dims);

/// Quantities of the most probable (typical) spectrum, from the Laguerre
/// coefficients. Balanced bipartitions are covered: they coincide with the
/// (N-1, N+1) problem plus a zero eigenvalue, so the determinant is 0.
struct TypicalQuantities {
    BipartitionDims dims;
    double xi;                        // N (M - 1)
    double purity;                    // (N + M - 2) / (N (M - 1))
    double purity_multiplier_route;   // (2 (N - 1) + (M - N)) / xi
    std::vector<double> invariants;   // s_1..s_kmax
    double determinant;               // s_N
    double log_determinant;           // -inf when balanced

    double invariant(int k) const;
};

/// s_k of the typical spectrum in log-gamma arithmetic. Throws DomainError
/// unless 1 <= k <= N.
double typical_invariant(const BipartitionDims& dims, int k);
double typical_log_invariant(const BipartitionDims& dims, int k);

TypicalQuantities typical_quantities(const BipartitionDims& dims, int k_max);

/// The most probable spectrum: zeros of L_N^{(M-N-1)}(N (M - 1) x). For M = N
/// one eigenvalue is 0 and the rest are the (N - 1, N + 1) solution.
Spectrum typical_spectrum(const BipartitionDims& dims);

/// Leading coefficient of N^{k-1} tr rho^k at the typical spectrum as
/// N, M -> inf with mu fixed, for k = 2..5. Catalan numbers at mu = 0.
double asymptotic_traces(int k, double mu);

/// ln(N!) - 2 N ln N, the large-N typical log-determinant for M = N.
double balanced_det_asymptotic(int n);

struct FormulaRow {
    std::string quantity;
    int n;
    int m;
    double value;
    std::string formula_id;
};

/// Every closed form available for the given dimensions.
std::vector<FormulaRow> formula_table(const BipartitionDims& dims);

/// CSV with header quantity,N,M,value,paper_formula_id.
std::string formula_table_csv(const std::vector<FormulaRow>& rows);

}  // namespace typent::closedform
