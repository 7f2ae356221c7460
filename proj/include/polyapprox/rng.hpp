#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace polyapprox {

/// Seeded 64-bit Mersenne twister with platform-independent draws.
///
/// The standard distributions are implementation-defined, so uniform and
/// index draws are derived directly from the raw 64-bit stream to keep
/// results bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), unbiased (rejection on the top range).
    std::uint64_t index(std::uint64_t n);

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Child seed for a (role, trial) stream: splitmix64(master ^ fnv1a(role) ^ trial mix).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::string_view role, std::uint64_t trial = 0) noexcept;

}  // namespace polyapprox
