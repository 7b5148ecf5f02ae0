#include "typent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "typent/errors.hpp"

namespace typent::linalg {

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal,
                                            std::span<const double> off_diagonal) {
    const std::size_t n = diagonal.size();
    if (n == 0) return {};
    if (off_diagonal.size() + 1 != n)
        throw DimensionError("tridiagonal_eigenvalues: off-diagonal must have n-1 entries");

    std::vector<double> d(diagonal.begin(), diagonal.end());
    std::vector<double> e(n, 0.0);
    std::copy(off_diagonal.begin(), off_diagonal.end(), e.begin());

    constexpr int max_sweeps = 60;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto nn = static_cast<std::ptrdiff_t>(n);

    for (std::ptrdiff_t l = 0; l < nn; ++l) {
        int sweeps = 0;
        std::ptrdiff_t m;
        do {
            for (m = l; m < nn - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++sweeps > max_sweeps)
                throw ConvergenceError("tridiagonal QL did not converge", std::abs(e[l]));

            // Wilkinson shift from the leading 2x2 block.
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool deflated = false;
            for (std::ptrdiff_t i = m - 1; i >= l; --i) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix a) {
    using cplx = std::complex<double>;
    const std::size_t n = a.size();
    if (n == 0) return {};

    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (std::size_t j = 0; j < i; ++j) a(j, i) = std::conj(a(i, j));
    }

    std::vector<cplx> v(n);
    std::vector<cplx> w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(a(i, k));
        double tail2 = norm2 - std::norm(a(k + 1, k));
        if (tail2 <= 0.0) continue;

        const cplx x0 = a(k + 1, k);
        const double x0_abs = std::abs(x0);
        const cplx phase = x0_abs > 0.0 ? x0 / x0_abs : cplx(1.0, 0.0);
        const cplx beta = -phase * std::sqrt(norm2);

        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= beta;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        const double tau = 2.0 / vnorm2;

        // p = tau * A v on the trailing block; w = p - (tau * v^H p / 2) v.
        cplx vp(0.0, 0.0);
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx s(0.0, 0.0);
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            w[i] = tau * s;
            vp += std::conj(v[i]) * w[i];
        }
        const cplx half = 0.5 * tau * vp.real();
        for (std::size_t i = k + 1; i < n; ++i) w[i] -= half * v[i];

        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);

        a(k + 1, k) = beta;
        a(k, k + 1) = std::conj(beta);
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0.0;
            a(k, i) = 0.0;
        }
    }

    // A diagonal unitary similarity turns the complex off-diagonal into its modulus.
    std::vector<double> diag(n);
    std::vector<double> off(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = std::abs(a(i + 1, i));
    return tridiagonal_eigenvalues(diag, off);
}

bool is_positive_definite(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 0.0)) return false;
        l(j, j) = std::sqrt(pivot);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

std::vector<double> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw DimensionError("solve: shape mismatch");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) throw DomainError("solve: singular matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
        x[i] = s / a(i, i);
    }
    return x;
}

}  // namespace typent::linalg
