#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "typent/core.hpp"
#include "typent/rng.hpp"

namespace typent::sampler {

struct SamplerConfig {
    BipartitionDims dims;
    std::int64_t sample_count = 1;
    std::uint64_t seed = 0;
    std::int64_t chunk_size = 256;  // samples per work unit
    int threads = 0;                // 0: hardware concurrency, capped by TYPENT_THREADS
};

/// Worker count actually used for a config.
int resolve_threads(const SamplerConfig& config);

/// Spectrum of the reduced state of one Haar-random pure state: eigenvalues of
/// W W^dagger / tr(W W^dagger) for an n x m matrix W of i.i.d. complex normals.
Spectrum sample_spectrum(const BipartitionDims& dims, CounterRng& rng);

/// Eigenvalues before clamping, in ascending order; they sum to 1 up to
/// rounding.
std::vector<double> sample_raw_eigenvalues(const BipartitionDims& dims, CounterRng& rng);

enum class FunctionalKind { purity, entropy, det, det_power, lambda_variance, trace_power };

struct Functional {
    FunctionalKind kind;
    int k = 1;  // exponent for det_power / trace_power

    /// "purity", "entropy", "det", "det_power:K", "lambda_variance", "trace_power:K".
    static Functional parse(const std::string& name);
    std::string name() const;
    double evaluate(const Spectrum& spectrum) const;
};

struct EnsembleEstimate {
    std::string functional;
    int n;
    int m;
    std::int64_t count;
    std::uint64_t seed;
    double mean;
    double std_error;  // sample standard deviation / sqrt(count)
};

/// Monte Carlo estimate. Sample i always uses stream i of the seed, and the
/// reduction runs in index order, so the result is bit-identical for any
/// chunk size or thread count.
EnsembleEstimate estimate(const SamplerConfig& config, const Functional& functional);

/// Several functionals from one set of samples.
std::vector<EnsembleEstimate> estimate_many(const SamplerConfig& config,
                                            std::span<const Functional> functionals);

struct Histogram {
    std::vector<double> edges;    // bins + 1 entries
    std::vector<double> density;  // unit total area
};

/// All rescaled eigenvalues n * lambda over all samples, ascending.
std::vector<double> rescaled_eigenvalues(const SamplerConfig& config);

/// Histogram of rescaled eigenvalues over [0, max(4, largest observed)].
Histogram histogram_rescaled(const SamplerConfig& config, int bins);
Histogram histogram_from_values(std::span<const double> rescaled, int bins);

nlohmann::json to_json(const EnsembleEstimate& e);
std::string histogram_csv(const Histogram& h);

}  // namespace typent::sampler
