#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace typent {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3", SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based stream keyed by (seed, stream index). Two streams with
/// different indices never overlap, and a stream's output does not depend on
/// which thread draws it or in what order streams are created.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Pair of independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
};

}  // namespace typent
