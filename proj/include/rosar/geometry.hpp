// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace rosar {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

enum class AntennaPattern { cosine };

/// Physical and waveform constants of the rotating radar.
/// Defaults follow the desk-scale 60 GHz FMCW setup used throughout the tests.
struct RadarConfig {
    double rotation_radius = 0.145;    ///< r [m], radius of the phase-center circle
    int pulses_per_rev = 800;          ///< N, chirps per full rotation
    double carrier_hz = 60e9;          ///< f_c [Hz]
    double chirp_slope = 6.8e13;       ///< K [Hz/s]
    double sample_rate_hz = 4.5e6;     ///< F_s [Hz]
    int samples_per_pulse = 225;       ///< M
    int range_bins = 225;              ///< L (>= M, zero-padded when larger)
    double sample_start_s = 7e-6;      ///< T_start [s]
    double wave_speed = 3.0e8;         ///< c [m/s]
    AntennaPattern antenna = AntennaPattern::cosine;

    double sample_interval() const { return 1.0 / sample_rate_hz; } ///< t_s
    double pulse_step() const { return kTwoPi / pulses_per_rev; }   ///< phi_delta
    /// k = 2*pi*(K*T_start + f_c)/c; the IF signal carries phase exp(j*2*k*R_n).
    double wavenumber() const {
        return kTwoPi * (chirp_slope * sample_start_s + carrier_hz) / wave_speed;
    }
    /// Sampled chirp bandwidth B = K*M*t_s.
    double bandwidth() const { return chirp_slope * samples_per_pulse * sample_interval(); }
    /// Range resolution c/(2B).
    double range_resolution() const { return wave_speed / (2.0 * bandwidth()); }
    /// Physical range covered by one FFT bin, c/(2*K*t_s*L). Equals range_resolution() when L = M.
    double range_bin_spacing() const {
        return wave_speed / (2.0 * chirp_slope * sample_interval() * range_bins);
    }
    /// Maximum unambiguous range c*F_s/(4K).
    double max_unambiguous_range() const {
        return wave_speed * sample_rate_hz / (4.0 * chirp_slope);
    }

    /// Throws std::invalid_argument when a field violates its invariant.
    void validate() const;
};

/// Antenna element gain: cos(theta) inside (-pi/2, pi/2), zero outside.
double element_gain(const RadarConfig& cfg, double theta);

/// Target position in the rotation-center polar frame.
struct TargetPolar {
    double azimuth = 0.0; ///< phi_t [rad]
    double range = 0.0;   ///< R_t [m], must exceed the rotation radius
};

/// Contiguous run of phase-center indices that see a target, plus the half-view angle.
struct ApertureWindow {
    int n_min = 0;
    int n_max = -1;
    double half_view = 0.0; ///< phi_v = arccos(r/R)

    int length() const { return n_max - n_min + 1; }
    bool empty() const { return n_max < n_min; }
};

/// Bore-sight direction 2*pi*n/N of phase center n. Throws std::out_of_range.
double phase_center_direction(const RadarConfig& cfg, int n);

/// Distance and aspect angle seen from phase-center azimuth delta = phi_n - phi_t
/// toward a target at range R. theta uses atan2(R sin|delta|, R cos|delta| - r) so
/// centers behind the target land beyond +-pi/2 and get zero element gain.
double range_from_center(const RadarConfig& cfg, double delta, double R);
double aspect_from_center(const RadarConfig& cfg, double delta, double R);

/// (R_n, theta_n) from phase center n to the target.
std::pair<double, double> target_range_angle(const RadarConfig& cfg, const TargetPolar& target, int n);

/// Visibility window in the canonical frame (target azimuth fixed at pi/2):
/// N_min = ceil((pi/2 - phi_v)/phi_delta), N_max = floor((pi/2 + phi_v)/phi_delta).
/// Throws std::domain_error when the target range does not exceed the rotation radius.
ApertureWindow visibility_window(const RadarConfig& cfg, const TargetPolar& target);

/// Same window recentered on an arbitrary azimuth; indices may fall outside [0, N)
/// and are wrapped modulo N by consumers that hold full-revolution data.
ApertureWindow visibility_window_at(const RadarConfig& cfg, double azimuth, double range);

/// Near-field array response toward (phi; R) over a phase-center window.
/// Entry n is cos(theta'_n) * exp(j * 2k * R_n(phi, R)).
struct SteeringVector {
    ApertureWindow window;
    double range = 0.0;
    std::vector<std::complex<double>> entries;

    double squared_norm() const;
    double norm() const;
};

SteeringVector steering_vector(const RadarConfig& cfg, double azimuth, double range,
                               const ApertureWindow& window);

} // namespace rosar
