#pragma once

#include <cmath>
#include <cstdint>

namespace nsc {

namespace detail {
// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based stream keyed by (seed, tree-node address).  Streams at
/// distinct addresses are independent by construction and a given
/// (key, counter) always produces the same draw, so estimates do not depend
/// on traversal order or worker count.
struct RngStream {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static RngStream from_seed(std::uint64_t seed) {
        return {detail::mix64(seed ^ 0x6a09e667f3bcc908ULL), 0};
    }

    /// Derive an independent stream (per grid point, per cascade, per child).
    RngStream child(std::uint64_t idx) const {
        return {detail::mix64(key ^ detail::mix64(idx + 0x9e3779b97f4a7c15ULL)), 0};
    }

    std::uint64_t next_u64() {
        const std::uint64_t c = counter++;
        return detail::mix64(detail::mix64(key ^ c) + key);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1].
    double next_double_oc() { return 1.0 - next_double(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no cache).
    double next_normal() {
        const double u1 = next_double_oc();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double next_exponential() { return -std::log(next_double_oc()); }

    /// Gamma(1/2, 1) as N^2/2.
    double next_gamma_half() {
        const double n = next_normal();
        return 0.5 * n * n;
    }

    /// Gamma(3/2, 1) as N^2/2 + Exp(1).
    double next_gamma_three_half() { return next_gamma_half() + next_exponential(); }
};

}  // namespace nsc
