// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace rosar {

/// Deterministic pseudo-random stream: SplitMix64 keyed by (seed, label, index).
///
/// Every random draw in the toolkit flows from one top-level seed fanned out into
/// labeled substreams, so parallel and serial runs of the same configuration produce
/// identical results. The generator is fully specified here (no reliance on
/// implementation-defined std:: distributions): 64-bit SplitMix64 for integers,
/// 53-bit mantissa uniforms, Box-Muller for Gaussians.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    /// Substream constructor: hashes (seed, label, index) into the initial state.
    Rng(std::uint64_t seed, std::string_view label, std::uint64_t index);

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (second variate cached).
    double gaussian();

    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    std::complex<double> complex_gaussian();

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rosar
