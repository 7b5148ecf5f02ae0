#include "typent/closedform.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "typent/coulomb.hpp"
#include "typent/errors.hpp"
#include "typent/orthopoly.hpp"

namespace typent::closedform {
namespace {

double log_factorial(double k) { return std::lgamma(k + 1.0); }

}  // namespace

double log_normalization(const BipartitionDims& dims) {
    const int n = dims.n();
    const int m = dims.m();
    double log_c = log_factorial(static_cast<double>(n) * m - 1.0);
    for (int j = 1; j <= n; ++j) log_c -= log_factorial(m - j) + log_factorial(n - j + 1);
    return log_c;
}

double log_det_moment(const BipartitionDims& dims, int k) {
    if (k < 0) throw DomainError("det_moment: k must be >= 0");
    if (k == 0) return 0.0;
    return log_normalization(dims) - log_normalization(BipartitionDims(dims.n(), dims.m() + k));
}

double det_moment(const BipartitionDims& dims, int k) { return std::exp(log_det_moment(dims, k)); }

double EnsembleMoments::sigma_rms_asymptotic() const {
    return 1.0 / (dims.n() * std::sqrt(1.0 + dims.mu_ratio()));
}

double EnsembleMoments::mean_purity_asymptotic() const {
    const double mu = dims.mu_ratio();
    return (2.0 + mu) / ((1.0 + mu) * dims.n());
}

EnsembleMoments mean_moments(const BipartitionDims& dims) {
    const double n = dims.n();
    const double m = dims.m();
    const double nm = n * m;

    // Page: sum_{k=M+1}^{NM} 1/k - (N-1)/(2M), summed smallest terms first.
    double harmonic = 0.0;
    for (long long k = static_cast<long long>(nm); k > dims.m(); --k) harmonic += 1.0 / k;

    return EnsembleMoments{dims,
                           1.0 / n,
                           std::sqrt((1.0 - 1.0 / (n * n)) / (nm + 1.0)),
                           (n + m) / (nm + 1.0),
                           harmonic - (n - 1.0) / (2.0 * m),
                           log_normalization(dims)};
}

double typical_log_invariant(const BipartitionDims& dims, int k) {
    const int n = dims.n();
    const int m = dims.m();
    if (k < 1 || k > n)
        throw DomainError(fmt::format("invariant index k = {} outside 1..{}", k, n));
    if (n == 1) return 0.0;
    if (m - k - 1 < 0) return -std::numeric_limits<double>::infinity();  // balanced, k = N
    const double xi = static_cast<double>(coulomb::multiplier_xi(dims));
    return log_factorial(n) + log_factorial(m - 1) - log_factorial(k) - log_factorial(n - k) -
           log_factorial(m - k - 1) - k * std::log(xi);
}

double typical_invariant(const BipartitionDims& dims, int k) {
    return std::exp(typical_log_invariant(dims, k));
}

double TypicalQuantities::invariant(int k) const {
    if (k < 1 || k > static_cast<int>(invariants.size()))
        throw DomainError(fmt::format("invariant s_{} not computed", k));
    return invariants[k - 1];
}

TypicalQuantities typical_quantities(const BipartitionDims& dims, int k_max) {
    const int n = dims.n();
    const int m = dims.m();
    if (k_max > n) throw DomainError(fmt::format("k_max = {} exceeds N = {}", k_max, n));

    TypicalQuantities q{dims, static_cast<double>(coulomb::multiplier_xi(dims)), 1.0, 1.0, {}, 1.0,
                        0.0};
    if (n > 1) {
        q.purity = (n + m - 2.0) / (static_cast<double>(n) * (m - 1.0));
        q.purity_multiplier_route = (2.0 * (n - 1) + (m - n)) / q.xi;
    }
    for (int k = 1; k <= k_max; ++k) q.invariants.push_back(typical_invariant(dims, k));
    q.log_determinant = typical_log_invariant(dims, n);
    q.determinant = std::exp(q.log_determinant);
    return q;
}

Spectrum typical_spectrum(const BipartitionDims& dims) {
    if (dims.n() == 1) return Spectrum({1.0});
    if (dims.balanced()) {
        const auto reduced = typical_spectrum(BipartitionDims(dims.n() - 1, dims.n() + 1));
        std::vector<double> with_zero(reduced.values().begin(), reduced.values().end());
        with_zero.push_back(0.0);
        return Spectrum::from_eigenvalues(std::move(with_zero), kClampTolerance);
    }
    const auto zeros = orthopoly::laguerre_zeros(
        {dims.n(), dims.m() - dims.n() - 1.0, static_cast<double>(coulomb::multiplier_xi(dims))});
    return Spectrum::from_eigenvalues(zeros, kClampTolerance);
}

double asymptotic_traces(int k, double mu) {
    if (mu < 0.0) throw DomainError("asymptotic_traces: mu must be >= 0");
    const double d = 1.0 + mu;
    switch (k) {
        case 2: return (2.0 + mu) / d;
        case 3: return (5.0 + 5.0 * mu + mu * mu) / (d * d);
        case 4: return (14.0 + 21.0 * mu + 9.0 * mu * mu + mu * mu * mu) / (d * d * d);
        case 5:
            return (42.0 + 84.0 * mu + 56.0 * mu * mu + 14.0 * mu * mu * mu + mu * mu * mu * mu) /
                   (d * d * d * d);
        default: throw DomainError(fmt::format("asymptotic trace known for k = 2..5, not {}", k));
    }
}

double balanced_det_asymptotic(int n) {
    if (n < 1) throw DomainError("balanced_det_asymptotic: n must be >= 1");
    return log_factorial(n) - 2.0 * n * std::log(static_cast<double>(n));
}

std::vector<FormulaRow> formula_table(const BipartitionDims& dims) {
    const int n = dims.n();
    const int m = dims.m();
    const auto mean = mean_moments(dims);
    const auto typ = typical_quantities(dims, n);
    std::vector<FormulaRow> rows{
        {"mean_lambda", n, m, mean.mean_lambda, "avg_lambda"},
        {"sigma_rms", n, m, mean.sigma_rms, "lubkin_rms"},
        {"mean_purity", n, m, mean.mean_purity, "lubkin_purity"},
        {"mean_entropy", n, m, mean.mean_entropy, "page_entropy"},
        {"log_normalization", n, m, mean.normalization_log, "normalization_C"},
        {"mean_det", n, m, det_moment(dims, 1), "det_moments"},
        {"typical_xi", n, m, typ.xi, "multiplier_xi"},
        {"typical_purity", n, m, typ.purity, "typical_purity"},
        {"typical_determinant", n, m, typ.determinant, "typical_det"},
        {"hessian_trace_bound", n, m, coulomb::hessian_trace_bound(dims), "hessian_trace"},
    };
    for (int k = 2; k <= n; ++k)
        rows.push_back({fmt::format("typical_s{}", k), n, m, typ.invariant(k), "typical_invariants"});
    if (!dims.balanced())
        rows.push_back({"trace_inverse", n, m, coulomb::trace_inverse(dims), "trace_inverse"});
    else
        rows.push_back({"balanced_log_det_asymptotic", n, m, balanced_det_asymptotic(n),
                        "balanced_det_limit"});
    for (int k = 2; k <= 5; ++k)
        rows.push_back({fmt::format("asymptotic_trace{}", k), n, m,
                        asymptotic_traces(k, dims.mu_ratio()), "thermodynamic_traces"});
    return rows;
}

std::string formula_table_csv(const std::vector<FormulaRow>& rows) {
    std::string out = "quantity,N,M,value,paper_formula_id\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{}\n", r.quantity, r.n, r.m, format_double(r.value),
                           r.formula_id);
    return out;
}

}  // namespace typent::closedform
