// SPDX-License-Identifier: Apache-2.0
#include "rosar/rng.hpp"

#include <cmath>

namespace rosar {

namespace {

// FNV-1a, the usual 64-bit constants.
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed, std::string_view label, std::uint64_t index)
    : state_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ fnv1a(label)) ^ mix(index * 0xd1342543de82ef95ULL + 1)) {}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::complex<double> Rng::complex_gaussian() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log(u1)); // variance 1/2 per component
    const double angle = 6.283185307179586476925286766559 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace rosar
