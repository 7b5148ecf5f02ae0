#include "typent/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "typent/errors.hpp"

namespace typent {

BipartitionDims::BipartitionDims(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw DomainError(fmt::format("subsystem dimension n must be >= 1 (got {})", n));
    if (m < n) throw DomainError(fmt::format("dimensions must satisfy n <= m (got n={}, m={})", n, m));
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> values, double clamp_below) {
    if (values.empty()) throw DomainError("spectrum must have at least one eigenvalue");
    double sum = 0.0;
    for (double& v : values) {
        if (!std::isfinite(v)) throw DomainError("spectrum entries must be finite");
        if (v < 0.0) {
            if (v < -clamp_below)
                throw DomainError(fmt::format("negative eigenvalue {} in spectrum", v));
            v = 0.0;
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance)
        throw DomainError(fmt::format("spectrum must sum to 1 (sum - 1 = {:.3e})", sum - 1.0));
    std::sort(values.begin(), values.end(), std::greater<>());
    return Spectrum(std::move(values), Trusted{});
}

Spectrum::Spectrum(std::vector<double> values)
    : Spectrum(from_eigenvalues(std::move(values), kClampTolerance)) {}

double purity(const Spectrum& spectrum) {
    double p = 0.0;
    for (double v : spectrum.values()) p += v * v;
    return p;
}

double trace_power(const Spectrum& spectrum, int k) {
    if (k < 1) throw DomainError("trace_power: k must be >= 1");
    double t = 0.0;
    for (double v : spectrum.values()) t += std::pow(v, k);
    return t;
}

std::vector<double> elementary_invariants(std::span<const double> values) {
    // Coefficients of prod (x + lambda_i), built one factor at a time.
    std::vector<double> e(values.size() + 1, 0.0);
    e[0] = 1.0;
    std::size_t degree = 0;
    for (double v : values) {
        ++degree;
        for (std::size_t k = degree; k >= 1; --k) e[k] += v * e[k - 1];
    }
    return {e.begin() + 1, e.end()};
}

std::vector<double> elementary_invariants(const Spectrum& spectrum) {
    return elementary_invariants(spectrum.values());
}

double von_neumann_entropy(const Spectrum& spectrum) {
    double s = 0.0;
    for (double v : spectrum.values())
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

int schmidt_number(const Spectrum& spectrum) {
    const double cutoff = kRankTolerance * spectrum[0];
    return static_cast<int>(std::count_if(spectrum.values().begin(), spectrum.values().end(),
                                          [cutoff](double v) { return v > cutoff; }));
}

std::string to_string(Majorization m) {
    switch (m) {
        case Majorization::a_majorized_by_b: return "a_majorized_by_b";
        case Majorization::b_majorized_by_a: return "b_majorized_by_a";
        case Majorization::equal: return "equal";
        case Majorization::incomparable: return "incomparable";
    }
    return "unknown";
}

Majorization majorization_compare(const Spectrum& a, const Spectrum& b) {
    if (a.size() != b.size())
        throw DimensionError(fmt::format("majorization_compare: lengths {} and {} differ",
                                         a.size(), b.size()));
    bool a_below = true;  // every partial sum of a <= that of b
    bool b_below = true;
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sa += a[k];
        sb += b[k];
        if (sa > sb + kSimplexTolerance) a_below = false;
        if (sb > sa + kSimplexTolerance) b_below = false;
    }
    if (a_below && b_below) return Majorization::equal;
    if (a_below) return Majorization::a_majorized_by_b;
    if (b_below) return Majorization::b_majorized_by_a;
    return Majorization::incomparable;
}

Quantifiers compute_quantifiers(const Spectrum& spectrum, int k_max) {
    Quantifiers q;
    q.purity = purity(spectrum);
    for (int k = 2; k <= k_max; ++k) q.renyi_traces.push_back(trace_power(spectrum, k));
    q.von_neumann_entropy = von_neumann_entropy(spectrum);
    q.schmidt_number = schmidt_number(spectrum);
    q.elementary_invariants = elementary_invariants(spectrum);
    q.determinant = q.elementary_invariants.back();
    return q;
}

nlohmann::json to_json(const Spectrum& spectrum) {
    return nlohmann::json(std::vector<double>(spectrum.values().begin(), spectrum.values().end()));
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DomainError("spectrum JSON must be an array of numbers");
    return Spectrum(j.get<std::vector<double>>());
}

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return fmt::format("{:.17g}", x);
}

std::string to_csv_row(std::span<const double> values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    return row;
}

Spectrum spectrum_from_csv_row(const std::string& row) {
    std::vector<double> values;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw DomainError(fmt::format("bad CSV cell '{}'", cell));
        }
    }
    return Spectrum(std::move(values));
}

}  // namespace typent
