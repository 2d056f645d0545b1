#pragma once

#include <cmath>
#include <cstdint>

namespace swsgd {

/// Identifies one deterministic random stream: a master seed plus the index
/// of the stream within the experiment (normally the replication index).
/// The (master_seed, stream_index) -> stream mapping is a pure function, so
/// any replication can be reproduced in isolation.
struct RngStreamSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output scrambler (Steele/Lea/Flood; Vigna's constants).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

/// SplitMix64 stream with deterministic per-index derivation.
///
/// Fixed project-wide generator: the integer layer is bit-reproducible on
/// any platform (pure 64-bit arithmetic). Stream i of master seed s starts
/// from state mix64(s + (i+1) * 0x9E3779B97F4A7C15); each draw advances the
/// state by the same golden-ratio increment and scrambles it.
///
/// Gaussians use Box-Muller on the 53-bit uniform layer; every normal draw
/// consumes exactly two 64-bit outputs.
class RngStream {
public:
    RngStream() : state_(detail::mix64(detail::kGolden)) {}

    explicit RngStream(const RngStreamSpec& spec)
        : state_(detail::mix64(spec.master_seed +
                               detail::kGolden * (spec.stream_index + 1))) {}

    std::uint64_t next_u64() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    /// Uniform draw in (0, 1], 53-bit resolution. Never returns 0, so it is
    /// safe under a logarithm.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (cosine branch only).
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    double next_normal(double mean, double stddev) {
        return mean + stddev * next_normal();
    }

private:
    std::uint64_t state_;
};

/// Builds the stream for a spec. Same spec, same sequence, on every run.
inline RngStream derive_stream(const RngStreamSpec& spec) {
    return RngStream(spec);
}

}  // namespace swsgd
