#include <doctest.h>

#include <cmath>
#include <set>

#include "typent/rng.hpp"

using namespace typent;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using Block = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    CounterRng a(42, 7);
    CounterRng b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(CounterRng(42, s).next_u64());
    CHECK(firsts.size() == 1000);
    CHECK(CounterRng(1, 0).next_u64() != CounterRng(2, 0).next_u64());
}

TEST_CASE("uniform and normal moments") {
    CounterRng rng(123, 0);
    const int n = 200000;
    double su = 0.0;
    double sn = 0.0;
    double sn2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const auto [x, y] = rng.normal_pair();
        sn += x + y;
        sn2 += x * x + y * y;
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / (2.0 * n)) < 5.0 / std::sqrt(2.0 * n));
    CHECK(sn2 / (2.0 * n) == doctest::Approx(1.0).epsilon(0.01));
}
