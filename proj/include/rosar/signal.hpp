// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rosar/geometry.hpp"

namespace rosar {

struct PointTarget {
    TargetPolar position;
    std::complex<double> reflectivity{1.0, 0.0};
};

struct PointScene {
    std::vector<PointTarget> targets;
    double noise_power = 0.0; ///< linear variance of complex white noise per sample
};

/// Per-pulse azimuth error: phi_hat_n ~ N(2*pi*n/N, sigma).
struct JitterModel {
    double sigma_rad = 0.0;
    std::uint64_t seed = 0;
};

enum class DataKind { IF, RangeCompressed };

/// Column-major complex sample matrix: M x P raw IF data or L x P range-compressed data,
/// with the (possibly jittered) azimuth actually flown for each pulse.
struct DataMatrix {
    DataKind kind = DataKind::IF;
    int rows = 0;   ///< M for IF, L for range-compressed
    int pulses = 0; ///< P
    std::vector<std::complex<double>> data;
    std::vector<double> pulse_azimuths;

    std::complex<double>& at(int row, int pulse) {
        return data[static_cast<std::size_t>(pulse) * rows + row];
    }
    const std::complex<double>& at(int row, int pulse) const {
        return data[static_cast<std::size_t>(pulse) * rows + row];
    }
    const std::complex<double>* column(int pulse) const {
        return data.data() + static_cast<std::size_t>(pulse) * rows;
    }
};

/// Simulate one revolution of deramped IF returns from point targets.
///
/// Sample (m, n) = sum over targets of alpha_n * exp(j*2*pi*[tau_n*K*(m*t_s + T_start)
/// + f_c*tau_n]) + noise, with alpha_n = p(theta_n) * reflectivity, tau_n = 2*R_n/c and
/// geometry evaluated at the jittered azimuth. The residual video phase term is dropped.
/// Pulses are simulated in parallel; each pulse draws from its own (seed, pulse) substream
/// so the output is identical for any thread count.
DataMatrix simulate_if(const RadarConfig& cfg, const PointScene& scene, const JitterModel& jitter,
                       int threads = 0);

/// L-point DFT of every column (zero-padded when L > M). Throws on kind mismatch.
DataMatrix range_fft(const DataMatrix& matrix, const RadarConfig& cfg);

/// Range bin that maximizes the range-compressed response: round(2*R*K*t_s*L/c).
/// Throws std::domain_error outside [0, max unambiguous range).
int range_bin_of(const RadarConfig& cfg, double R);

/// Range at the center of a bin (inverse of range_bin_of's mapping).
double bin_center_range(const RadarConfig& cfg, int bin);

/// Steering-vector error norms ||a_hat - a|| under rotation jitter, one per draw,
/// for the canonical window at range R. Deterministic under a fixed jitter seed.
std::vector<double> sample_phase_errors(const RadarConfig& cfg, const JitterModel& jitter,
                                        double R, int draws);

} // namespace rosar
