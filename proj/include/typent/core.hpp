#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace typent {

/// Dimensions of a bipartition H_A (x) H_B with dim H_A = n <= dim H_B = m.
class BipartitionDims {
public:
    /// Throws DomainError unless 1 <= n <= m.
    BipartitionDims(int n, int m);

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }

    /// m - n; the charge sitting at the origin of the log-gas.
    int alpha() const noexcept { return m_ - n_; }

    /// (m - n) / n.
    double mu_ratio() const noexcept { return static_cast<double>(m_ - n_) / n_; }

    bool balanced() const noexcept { return n_ == m_; }

    friend bool operator==(const BipartitionDims&, const BipartitionDims&) = default;

private:
    int n_;
    int m_;
};

inline constexpr double kSimplexTolerance = 1e-12;
inline constexpr double kClampTolerance = 1e-14;
inline constexpr double kRankTolerance = 1e-10;

/// Eigenvalues of a reduced density matrix: nonnegative, unit sum, stored
/// in non-increasing order. Immutable.
class Spectrum {
public:
    /// Validates and sorts. Entries in [-1e-14, 0) are clamped to 0; anything
    /// more negative, or a sum off 1 by more than 1e-12, throws DomainError.
    explicit Spectrum(std::vector<double> values);

    /// Same as the constructor but accepts negatives down to -clamp_below and
    /// clamps them; used for raw eigen-solver output.
    static Spectrum from_eigenvalues(std::vector<double> values, double clamp_below);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
    struct Trusted {};
    Spectrum(std::vector<double> values, Trusted) : values_(std::move(values)) {}

    std::vector<double> values_;
};

double purity(const Spectrum& spectrum);

/// tr rho^k = sum lambda_i^k.
double trace_power(const Spectrum& spectrum, int k);

/// (s_1, ..., s_N), the elementary symmetric polynomials of the spectrum.
std::vector<double> elementary_invariants(std::span<const double> values);
std::vector<double> elementary_invariants(const Spectrum& spectrum);

/// -sum lambda ln lambda with 0 ln 0 = 0.
double von_neumann_entropy(const Spectrum& spectrum);

/// Number of eigenvalues above kRankTolerance * lambda_1.
int schmidt_number(const Spectrum& spectrum);

enum class Majorization { a_majorized_by_b, b_majorized_by_a, equal, incomparable };

std::string to_string(Majorization m);

/// Partial-sum comparison; throws DimensionError on length mismatch.
Majorization majorization_compare(const Spectrum& a, const Spectrum& b);

struct Quantifiers {
    double purity;
    std::vector<double> renyi_traces;  // tr rho^k for k = 2..k_max
    double von_neumann_entropy;
    int schmidt_number;
    std::vector<double> elementary_invariants;
    double determinant;
};

Quantifiers compute_quantifiers(const Spectrum& spectrum, int k_max = 5);

// Serialization. JSON arrays round-trip doubles exactly; CSV uses 17
// significant digits.
nlohmann::json to_json(const Spectrum& spectrum);
Spectrum spectrum_from_json(const nlohmann::json& j);
std::string to_csv_row(std::span<const double> values);
Spectrum spectrum_from_csv_row(const std::string& row);

/// "%.17g" formatting shared by every CSV writer.
std::string format_double(double x);

}  // namespace typent
