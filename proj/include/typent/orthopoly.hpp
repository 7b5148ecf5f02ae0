#pragma once

#include <vector>

namespace typent::orthopoly {

/// L_N^{(a)}(scale * x). With a = M - N - 1 and scale = N(M - 1) the zeros
/// are the most probable unbiased spectrum.
struct LaguerreSpec {
    int degree;
    double order;
    double scale;
};

/// H_N(scale * (x - shift)).
struct HermiteSpec {
    int degree;
    double shift;
    double scale;
};

/// Value and derivative of a polynomial at a point, sharing a power-of-two
/// scale: the true value is ldexp(value, exponent). Ratios need no rescaling.
struct ScaledEvaluation {
    double value;
    double derivative;
    int exponent;
};

/// L_n^{(a)}(y) and d/dy, by the three-term recurrence.
ScaledEvaluation laguerre_evaluate(int degree, double order, double y);

/// H_n(z) and d/dz (physicists' normalization), by the three-term recurrence.
ScaledEvaluation hermite_evaluate(int degree, double z);

/// Unscaled values; overflow to inf for large arguments.
double laguerre_value(int degree, double order, double y);
double hermite_value(int degree, double z);

/// Zeros in x, ascending. Golub-Welsch eigenvalues of the Jacobi matrix,
/// mapped through the scale, then one Newton step. Throws DomainError when
/// order <= -1 or scale <= 0; degree 0 gives an empty vector.
std::vector<double> laguerre_zeros(const LaguerreSpec& spec);
std::vector<double> hermite_zeros(const HermiteSpec& spec);

/// |p(y)| / |p'(y) y| at the zero x (y = scale * x). Scale-free measure of how
/// well x solves the polynomial equation.
double laguerre_relative_residual(const LaguerreSpec& spec, double x);

/// |p(z)| / |p'(z)| at z = scale * (x - shift), relative to max(|z|, 1).
double hermite_relative_residual(const HermiteSpec& spec, double x);

/// c_0..c_N with L_N^{(a)}(scale x) proportional to sum c_nu (-x)^nu and
/// c_nu = scale^nu / nu! * binom(N + a, N - nu). Requires N + a = M - 1 for
/// an integer M in the physical setting, but any a > -1 is accepted.
/// Throws MagnitudeError when a coefficient overflows a double.
std::vector<double> laguerre_coefficients(const LaguerreSpec& spec);

/// Natural logs of the same coefficients; never overflows.
std::vector<double> laguerre_log_coefficients(const LaguerreSpec& spec);

}  // namespace typent::orthopoly
