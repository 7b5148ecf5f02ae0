#include "typent/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "typent/errors.hpp"
#include "typent/linalg.hpp"

namespace typent::sampler {

int resolve_threads(const SamplerConfig& config) {
    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("TYPENT_THREADS")) {
        const int c = std::atoi(cap);
        if (c > 0) threads = std::min(threads, c);
    }
    return std::max(threads, 1);
}

std::vector<double> sample_raw_eigenvalues(const BipartitionDims& dims, CounterRng& rng) {
    const int n = dims.n();
    const int m = dims.m();
    std::vector<std::complex<double>> w(static_cast<std::size_t>(n) * m);
    for (auto& z : w) {
        const auto [re, im] = rng.normal_pair();
        z = {re, im};
    }
    linalg::ComplexMatrix a(n);
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto* wi = &w[static_cast<std::size_t>(i) * m];
        for (int j = 0; j <= i; ++j) {
            const auto* wj = &w[static_cast<std::size_t>(j) * m];
            std::complex<double> s(0.0, 0.0);
            for (int k = 0; k < m; ++k) s += wi[k] * std::conj(wj[k]);
            a(i, j) = s;
        }
        trace += a(i, i).real();
    }
    auto ev = linalg::hermitian_eigenvalues(std::move(a));
    for (double& v : ev) v /= trace;
    return ev;
}

Spectrum sample_spectrum(const BipartitionDims& dims, CounterRng& rng) {
    return Spectrum::from_eigenvalues(sample_raw_eigenvalues(dims, rng), 1e-13);
}

Functional Functional::parse(const std::string& name) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    int k = 1;
    if (colon != std::string::npos) {
        try {
            k = std::stoi(name.substr(colon + 1));
        } catch (const std::exception&) {
            throw DomainError(fmt::format("bad exponent in functional '{}'", name));
        }
    }
    auto plain = [&](FunctionalKind kind) {
        if (colon != std::string::npos)
            throw DomainError(fmt::format("functional '{}' takes no exponent", head));
        return Functional{kind, 1};
    };
    auto indexed = [&](FunctionalKind kind, int min_k) {
        if (colon == std::string::npos || k < min_k)
            throw DomainError(fmt::format("functional '{}' needs ':K' with K >= {}", head, min_k));
        return Functional{kind, k};
    };
    if (head == "purity") return plain(FunctionalKind::purity);
    if (head == "entropy") return plain(FunctionalKind::entropy);
    if (head == "det") return plain(FunctionalKind::det);
    if (head == "lambda_variance") return plain(FunctionalKind::lambda_variance);
    if (head == "det_power") return indexed(FunctionalKind::det_power, 0);
    if (head == "trace_power") return indexed(FunctionalKind::trace_power, 1);
    throw DomainError(fmt::format("unknown functional '{}'", name));
}

std::string Functional::name() const {
    switch (kind) {
        case FunctionalKind::purity: return "purity";
        case FunctionalKind::entropy: return "entropy";
        case FunctionalKind::det: return "det";
        case FunctionalKind::det_power: return fmt::format("det_power:{}", k);
        case FunctionalKind::lambda_variance: return "lambda_variance";
        case FunctionalKind::trace_power: return fmt::format("trace_power:{}", k);
    }
    return "unknown";
}

double Functional::evaluate(const Spectrum& s) const {
    switch (kind) {
        case FunctionalKind::purity: return purity(s);
        case FunctionalKind::entropy: return von_neumann_entropy(s);
        case FunctionalKind::det: return elementary_invariants(s).back();
        case FunctionalKind::det_power: return std::pow(elementary_invariants(s).back(), k);
        case FunctionalKind::lambda_variance: {
            const double inv_n = 1.0 / static_cast<double>(s.size());
            double v = 0.0;
            for (double x : s.values()) v += (x - inv_n) * (x - inv_n);
            return v * inv_n;
        }
        case FunctionalKind::trace_power: return trace_power(s, k);
    }
    return 0.0;
}

namespace {

// Runs body(index, spectrum) for every sample index, spread over worker
// threads in chunks. body must only write to slots owned by its index.
void for_each_sample(const SamplerConfig& config,
                     const std::function<void(std::int64_t, const Spectrum&)>& body) {
    if (config.sample_count < 1) throw DomainError("sample_count must be >= 1");
    if (config.chunk_size < 1) throw DomainError("chunk_size must be >= 1");
    const std::int64_t chunks = (config.sample_count + config.chunk_size - 1) / config.chunk_size;
    std::atomic<std::int64_t> next_chunk{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::int64_t c = next_chunk++; c < chunks; c = next_chunk++) {
                const std::int64_t begin = c * config.chunk_size;
                const std::int64_t end = std::min(begin + config.chunk_size, config.sample_count);
                for (std::int64_t i = begin; i < end; ++i) {
                    CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
                    body(i, sample_spectrum(config.dims, rng));
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int threads = static_cast<int>(std::min<std::int64_t>(resolve_threads(config), chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

// Welford accumulation in index order.
EnsembleEstimate reduce(const SamplerConfig& config, const std::string& name,
                        std::span<const double> values, std::size_t stride, std::size_t offset) {
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t count = 0;
    for (std::size_t i = offset; i < values.size(); i += stride) {
        ++count;
        const double delta = values[i] - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (values[i] - mean);
    }
    const double variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    return EnsembleEstimate{name,
                            config.dims.n(),
                            config.dims.m(),
                            count,
                            config.seed,
                            mean,
                            std::sqrt(variance / static_cast<double>(count))};
}

}  // namespace

std::vector<EnsembleEstimate> estimate_many(const SamplerConfig& config,
                                            std::span<const Functional> functionals) {
    const std::size_t f = functionals.size();
    std::vector<double> values(static_cast<std::size_t>(config.sample_count) * f);
    for_each_sample(config, [&](std::int64_t i, const Spectrum& s) {
        for (std::size_t j = 0; j < f; ++j)
            values[static_cast<std::size_t>(i) * f + j] = functionals[j].evaluate(s);
    });
    std::vector<EnsembleEstimate> out;
    for (std::size_t j = 0; j < f; ++j)
        out.push_back(reduce(config, functionals[j].name(), values, f, j));
    return out;
}

EnsembleEstimate estimate(const SamplerConfig& config, const Functional& functional) {
    return estimate_many(config, std::span<const Functional>(&functional, 1)).front();
}

std::vector<double> rescaled_eigenvalues(const SamplerConfig& config) {
    const int n = config.dims.n();
    std::vector<double> values(static_cast<std::size_t>(config.sample_count) * n);
    for_each_sample(config, [&](std::int64_t i, const Spectrum& s) {
        for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(i) * n + j] = n * s[j];
    });
    std::sort(values.begin(), values.end());
    return values;
}

Histogram histogram_from_values(std::span<const double> rescaled, int bins) {
    if (bins < 10) throw DomainError("histogram needs at least 10 bins");
    if (rescaled.empty()) throw DomainError("histogram of an empty sample");
    const double top = std::max(4.0, *std::max_element(rescaled.begin(), rescaled.end()));
    const double width = top / bins;
    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = b * width;
    std::vector<std::int64_t> counts(bins, 0);
    for (double x : rescaled) {
        int b = static_cast<int>(x / width);
        counts[std::clamp(b, 0, bins - 1)]++;
    }
    h.density.resize(bins);
    const double total = static_cast<double>(rescaled.size());
    for (int b = 0; b < bins; ++b) h.density[b] = counts[b] / (total * width);
    return h;
}

Histogram histogram_rescaled(const SamplerConfig& config, int bins) {
    if (bins < 10) throw DomainError("histogram needs at least 10 bins");
    return histogram_from_values(rescaled_eigenvalues(config), bins);
}

nlohmann::json to_json(const EnsembleEstimate& e) {
    return nlohmann::json{{"functional", e.functional}, {"n", e.n},       {"m", e.m},
                          {"count", e.count},           {"seed", e.seed}, {"mean", e.mean},
                          {"std_error", e.std_error}};
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_left,bin_right,density\n";
    for (std::size_t b = 0; b < h.density.size(); ++b)
        out += fmt::format("{},{},{}\n", format_double(h.edges[b]), format_double(h.edges[b + 1]),
                           format_double(h.density[b]));
    return out;
}

}  // namespace typent::sampler
