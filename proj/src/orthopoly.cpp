#include "typent/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "typent/errors.hpp"
#include "typent/linalg.hpp"

namespace typent::orthopoly {
namespace {

// Monic three-term recurrence p_{k+1} = (y - a_k) p_k - b_k p_{k-1}, with the
// value/derivative pair rescaled by powers of two whenever it leaves
// [2^-256, 2^256].
template <class Diag, class Off>
ScaledEvaluation monic_evaluate(int degree, double y, Diag diag, Off off) {
    double p_prev = 0.0;
    double p = 1.0;
    double d_prev = 0.0;
    double d = 0.0;
    int exponent = 0;
    for (int k = 0; k < degree; ++k) {
        const double a = diag(k);
        const double b = k > 0 ? off(k) : 0.0;
        const double p_next = (y - a) * p - b * p_prev;
        const double d_next = p + (y - a) * d - b * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        const double mag = std::max(std::abs(p), std::abs(d));
        if (mag > 0x1p256 || (mag < 0x1p-256 && mag > 0.0)) {
            int e;
            std::frexp(mag, &e);
            p = std::ldexp(p, -e);
            d = std::ldexp(d, -e);
            p_prev = std::ldexp(p_prev, -e);
            d_prev = std::ldexp(d_prev, -e);
            exponent += e;
        }
    }
    return {p, d, exponent};
}

auto laguerre_diag(double order) {
    return [order](int k) { return 2.0 * k + order + 1.0; };
}
auto laguerre_off(double order) {
    return [order](int k) { return k * (k + order); };  // squared off-diagonal
}
auto hermite_diag() {
    return [](int) { return 0.0; };
}
auto hermite_off() {
    return [](int k) { return 0.5 * k; };
}

void check_laguerre(const LaguerreSpec& spec) {
    if (spec.degree < 0) throw DomainError("Laguerre degree must be >= 0");
    if (!(spec.order > -1.0))
        throw DomainError(fmt::format("Laguerre order must exceed -1 (got {})", spec.order));
    if (!(spec.scale > 0.0))
        throw DomainError(fmt::format("Laguerre scale must be positive (got {})", spec.scale));
}

void check_hermite(const HermiteSpec& spec) {
    if (spec.degree < 0) throw DomainError("Hermite degree must be >= 0");
    if (!(spec.scale > 0.0))
        throw DomainError(fmt::format("Hermite scale must be positive (got {})", spec.scale));
}

double newton_step(const ScaledEvaluation& ev) {
    return ev.derivative != 0.0 ? ev.value / ev.derivative : 0.0;
}

}  // namespace

ScaledEvaluation laguerre_evaluate(int degree, double order, double y) {
    auto ev = monic_evaluate(degree, y, laguerre_diag(order), laguerre_off(order));
    // L_n^{(a)} = (-1)^n / n! * monic; only the sign matters for ratios.
    if (degree % 2 == 1) {
        ev.value = -ev.value;
        ev.derivative = -ev.derivative;
    }
    return ev;
}

ScaledEvaluation hermite_evaluate(int degree, double z) {
    // H_n = 2^n * monic.
    auto ev = monic_evaluate(degree, z, hermite_diag(), hermite_off());
    ev.exponent += degree;
    return ev;
}

double laguerre_value(int degree, double order, double y) {
    const auto ev = laguerre_evaluate(degree, order, y);
    return std::ldexp(ev.value, ev.exponent) / std::tgamma(degree + 1.0);
}

double hermite_value(int degree, double z) {
    const auto ev = hermite_evaluate(degree, z);
    return std::ldexp(ev.value, ev.exponent);
}

std::vector<double> laguerre_zeros(const LaguerreSpec& spec) {
    check_laguerre(spec);
    const int n = spec.degree;
    if (n == 0) return {};

    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + spec.order + 1.0;
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + spec.order));

    std::vector<double> y = linalg::tridiagonal_eigenvalues(diag, off);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        const auto ev = laguerre_evaluate(n, spec.order, y[i]);
        const double polished = y[i] - newton_step(ev);
        // Keep the eigenvalue if the step would leave the positive axis.
        x[i] = (polished > 0.0 ? polished : y[i]) / spec.scale;
    }
    std::sort(x.begin(), x.end());
    return x;
}

std::vector<double> hermite_zeros(const HermiteSpec& spec) {
    check_hermite(spec);
    const int n = spec.degree;
    if (n == 0) return {};

    std::vector<double> diag(n, 0.0);
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);

    std::vector<double> z = linalg::tridiagonal_eigenvalues(diag, off);
    // Symmetrize: the zero set of H_n is exactly symmetric about 0.
    for (int i = 0; i < n / 2; ++i) {
        const double h = 0.5 * (z[n - 1 - i] - z[i]);
        z[i] = -h;
        z[n - 1 - i] = h;
    }
    if (n % 2 == 1) z[n / 2] = 0.0;

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        double zi = z[i];
        if (zi != 0.0) zi -= newton_step(hermite_evaluate(n, zi));
        z[i] = zi;
    }
    for (int i = 0; i < n / 2; ++i) {
        const double h = 0.5 * (z[n - 1 - i] - z[i]);
        z[i] = -h;
        z[n - 1 - i] = h;
    }
    for (int i = 0; i < n; ++i) x[i] = spec.shift + z[i] / spec.scale;
    std::sort(x.begin(), x.end());
    return x;
}

double laguerre_relative_residual(const LaguerreSpec& spec, double x) {
    const double y = spec.scale * x;
    const auto ev = laguerre_evaluate(spec.degree, spec.order, y);
    return std::abs(ev.value) / std::abs(ev.derivative * y);
}

double hermite_relative_residual(const HermiteSpec& spec, double x) {
    const double z = spec.scale * (x - spec.shift);
    const auto ev = hermite_evaluate(spec.degree, z);
    return std::abs(ev.value) / (std::abs(ev.derivative) * std::max(std::abs(z), 1.0));
}

std::vector<double> laguerre_log_coefficients(const LaguerreSpec& spec) {
    check_laguerre(spec);
    const int n = spec.degree;
    const double top = n + spec.order;  // M - 1
    std::vector<double> logc(n + 1);
    for (int nu = 0; nu <= n; ++nu) {
        const double k = n - nu;
        const double log_binom =
            std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0);
        logc[nu] = nu * std::log(spec.scale) - std::lgamma(nu + 1.0) + log_binom;
    }
    return logc;
}

std::vector<double> laguerre_coefficients(const LaguerreSpec& spec) {
    const auto logc = laguerre_log_coefficients(spec);
    constexpr double max_log = 709.0;  // ~ log(DBL_MAX)
    std::vector<double> c(logc.size());
    for (std::size_t nu = 0; nu < logc.size(); ++nu) {
        if (logc[nu] > max_log)
            throw MagnitudeError(fmt::format(
                "Laguerre coefficient c_{} = exp({:.1f}) overflows double; use "
                "laguerre_log_coefficients",
                nu, logc[nu]));
        c[nu] = std::exp(logc[nu]);
    }
    return c;
}

}  // namespace typent::orthopoly
