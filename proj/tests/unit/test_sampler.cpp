#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include <nlohmann/json.hpp>

#include "typent/closedform.hpp"
#include "typent/errors.hpp"
#include "typent/sampler.hpp"

using namespace typent;
using namespace typent::sampler;

namespace {

bool within_sigma(const EnsembleEstimate& e, double expected, double sigmas = 3.0) {
    return std::abs(e.mean - expected) <= sigmas * e.std_error;
}

}  // namespace

TEST_CASE("a single qubit subsystem is always pure") {
    CounterRng rng(9, 0);
    for (int m : {1, 3, 8}) {
        for (int i = 0; i < 20; ++i) {
            const auto s = sample_spectrum(BipartitionDims(1, m), rng);
            REQUIRE(s.size() == 1);
            CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
    const auto h = histogram_rescaled({BipartitionDims(1, 4), 50, 1}, 20);
    for (std::size_t b = 0; b < h.density.size(); ++b) {
        const bool holds_one = h.edges[b] <= 1.0 && 1.0 < h.edges[b + 1];
        if (holds_one)
            CHECK(h.density[b] * (h.edges[b + 1] - h.edges[b]) == doctest::Approx(1.0));
        else
            CHECK(h.density[b] == 0.0);
    }
}

TEST_CASE("two qubits: ensemble averages at 1e5 samples") {
    const SamplerConfig config{BipartitionDims(2, 2), 100000, 7};
    const std::vector<Functional> fs{Functional::parse("purity"), Functional::parse("entropy"),
                                     Functional::parse("det"), Functional::parse("lambda_variance")};
    const auto e = estimate_many(config, fs);
    CHECK(within_sigma(e[0], 0.8));
    CHECK(within_sigma(e[1], 1.0 / 3));
    CHECK(within_sigma(e[2], 0.1));
    CHECK(within_sigma(e[3], 0.15));
    CHECK(e[0].count == 100000);
    CHECK(e[0].seed == 7);
    CHECK(e[0].functional == "purity");
}

TEST_CASE("estimates are bit-identical across chunking and threads") {
    const Functional f = Functional::parse("entropy");
    SamplerConfig base{BipartitionDims(3, 5), 3001, 99, 256, 1};
    const auto ref = estimate(base, f);
    for (std::int64_t chunk : {1, 17, 1000, 5000})
        for (int threads : {1, 2, 4}) {
            SamplerConfig c = base;
            c.chunk_size = chunk;
            c.threads = threads;
            const auto e = estimate(c, f);
            CHECK(e.mean == ref.mean);
            CHECK(e.std_error == ref.std_error);
        }
    const auto rescaled_a = rescaled_eigenvalues({BipartitionDims(3, 5), 200, 1, 7, 3});
    const auto rescaled_b = rescaled_eigenvalues({BipartitionDims(3, 5), 200, 1, 64, 1});
    CHECK(rescaled_a == rescaled_b);
    base.seed = 100;
    CHECK(estimate(base, f).mean != ref.mean);
}

TEST_CASE("thread count honours the environment cap") {
    SamplerConfig c{BipartitionDims(2, 2), 10, 0, 256, 8};
    ::setenv("TYPENT_THREADS", "2", 1);
    CHECK(resolve_threads(c) == 2);
    ::setenv("TYPENT_THREADS", "16", 1);
    CHECK(resolve_threads(c) == 8);
    ::unsetenv("TYPENT_THREADS");
    CHECK(resolve_threads(c) == 8);
}

TEST_CASE("property: raw spectra have unit trace") {
    CounterRng rng(5, 1);
    for (int n = 1; n <= 8; ++n)
        for (int m : {n, n + 3}) {
            for (int i = 0; i < 20; ++i) {
                const auto raw = sample_raw_eigenvalues(BipartitionDims(n, m), rng);
                CHECK(std::abs(std::accumulate(raw.begin(), raw.end(), 0.0) - 1.0) <= 1e-12);
            }
        }
}

TEST_CASE("property: each position of a shuffled spectrum averages to 1/N") {
    const int n = 3;
    const int count = 30000;
    std::vector<double> sum(n, 0.0);
    std::vector<double> sum2(n, 0.0);
    for (int i = 0; i < count; ++i) {
        CounterRng rng(2718, static_cast<std::uint64_t>(i));
        const auto s = sample_spectrum(BipartitionDims(n, 4), rng);
        std::vector<double> v(s.values().begin(), s.values().end());
        for (int k = n - 1; k > 0; --k) {
            const int j = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(k + 1));
            std::swap(v[k], v[j]);
        }
        for (int k = 0; k < n; ++k) {
            sum[k] += v[k];
            sum2[k] += v[k] * v[k];
        }
    }
    for (int k = 0; k < n; ++k) {
        const double mean = sum[k] / count;
        const double var = sum2[k] / count - mean * mean;
        CHECK(std::abs(mean - 1.0 / n) <= 3.0 * std::sqrt(var / count));
    }
}

TEST_CASE("property: lambda variance equals (purity - 1/N) / N on every sample") {
    CounterRng rng(31, 0);
    const auto var = Functional::parse("lambda_variance");
    for (int i = 0; i < 200; ++i) {
        const auto s = sample_spectrum(BipartitionDims(4, 4), rng);
        CHECK(var.evaluate(s) == doctest::Approx((purity(s) - 0.25) / 4).epsilon(1e-12));
    }
}

TEST_CASE("agreement with closed forms over a grid of small dimensions") {
    // 36 gates at 3 sigma: false-failure rate 0.27% each, so more than two
    // failures would be a 1-in-10^4 event for a correct sampler.
    const std::vector<Functional> fs{Functional::parse("purity"), Functional::parse("entropy"),
                                     Functional::parse("det")};
    int gates = 0;
    int failures = 0;
    for (int n = 2; n <= 4; ++n)
        for (int m = std::max(n, 2); m <= 6; ++m) {
            const BipartitionDims d(n, m);
            const auto e = estimate_many({d, 100000, 1000u + 10u * n + m}, fs);
            const auto mom = closedform::mean_moments(d);
            const double expected[] = {mom.mean_purity, mom.mean_entropy, mom.det_moment(1)};
            for (int j = 0; j < 3; ++j) {
                ++gates;
                if (!within_sigma(e[j], expected[j])) {
                    ++failures;
                    MESSAGE("gate miss: n=" << n << " m=" << m << " " << e[j].functional
                                            << " mean=" << e[j].mean << " expected=" << expected[j]);
                }
            }
        }
    CHECK(gates == 36);
    CHECK(failures <= 2);
}

TEST_CASE("rescaled purity approaches 2 for balanced bipartitions") {
    const int n = 32;
    const auto e = estimate({BipartitionDims(n, n), 2000, 3}, Functional::parse("purity"));
    CHECK(n * e.mean == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("trace powers and determinant powers") {
    const auto e = estimate_many({BipartitionDims(2, 3), 50000, 4},
                                 std::vector<Functional>{Functional::parse("trace_power:2"),
                                                         Functional::parse("det_power:1"),
                                                         Functional::parse("det_power:2")});
    CHECK(within_sigma(e[0], 5.0 / 7));
    CHECK(within_sigma(e[1], 1.0 / 7));
    CHECK(within_sigma(e[2], closedform::det_moment(BipartitionDims(2, 3), 2)));
}

TEST_CASE("functional parsing") {
    CHECK(Functional::parse("det_power:3").k == 3);
    CHECK(Functional::parse("trace_power:4").name() == "trace_power:4");
    CHECK_THROWS_AS(Functional::parse("trace_power"), DomainError);
    CHECK_THROWS_AS(Functional::parse("trace_power:x"), DomainError);
    CHECK_THROWS_AS(Functional::parse("purity:2"), DomainError);
    CHECK_THROWS_AS(Functional::parse("negativity"), DomainError);
}

TEST_CASE("histogram normalization and export") {
    const auto h = histogram_rescaled({BipartitionDims(4, 4), 2000, 11}, 40);
    REQUIRE(h.edges.size() == 41);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.density.size(); ++b) mass += h.density[b] * (h.edges[b + 1] - h.edges[b]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() >= 4.0);
    const auto csv = histogram_csv(h);
    CHECK(csv.rfind("bin_left,bin_right,density\n", 0) == 0);
    CHECK_THROWS_AS(histogram_rescaled({BipartitionDims(4, 4), 10, 1}, 5), DomainError);
    CHECK_THROWS_AS(estimate({BipartitionDims(2, 2), 0, 1}, Functional::parse("purity")), DomainError);
}

TEST_CASE("estimate json fields") {
    const auto e = estimate({BipartitionDims(2, 2), 100, 5}, Functional::parse("det"));
    const auto j = to_json(e);
    for (const char* key : {"functional", "n", "m", "count", "seed", "mean", "std_error"})
        CHECK(j.contains(key));
    CHECK(j.at("count") == 100);
}
