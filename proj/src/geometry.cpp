// SPDX-License-Identifier: Apache-2.0
#include "rosar/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rosar {

void RadarConfig::validate() const {
    if (!(rotation_radius > 0.0)) throw std::invalid_argument("rotation_radius must be > 0");
    if (pulses_per_rev < 3) throw std::invalid_argument("pulses_per_rev must be >= 3");
    if (samples_per_pulse < 1) throw std::invalid_argument("samples_per_pulse must be >= 1");
    if (range_bins < 1) throw std::invalid_argument("range_bins must be >= 1");
    if (range_bins < samples_per_pulse)
        throw std::invalid_argument("range_bins must be >= samples_per_pulse");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample_rate_hz must be > 0");
    if (!(chirp_slope > 0.0)) throw std::invalid_argument("chirp_slope must be > 0");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("carrier_hz must be > 0");
    if (!(wave_speed > 0.0)) throw std::invalid_argument("wave_speed must be > 0");
    if (sample_start_s < 0.0) throw std::invalid_argument("sample_start_s must be >= 0");
}

double element_gain(const RadarConfig&, double theta) {
    return (theta > -kPi / 2 && theta < kPi / 2) ? std::cos(theta) : 0.0;
}

double phase_center_direction(const RadarConfig& cfg, int n) {
    if (n < 0 || n >= cfg.pulses_per_rev)
        throw std::out_of_range("phase center index " + std::to_string(n) + " outside [0, N)");
    return kTwoPi * n / cfg.pulses_per_rev;
}

double range_from_center(const RadarConfig& cfg, double delta, double R) {
    const double r = cfg.rotation_radius;
    return std::sqrt(R * R + r * r - 2.0 * r * R * std::cos(delta));
}

double aspect_from_center(const RadarConfig& cfg, double delta, double R) {
    const double ad = std::abs(delta);
    return std::atan2(R * std::sin(ad), R * std::cos(ad) - cfg.rotation_radius);
}

std::pair<double, double> target_range_angle(const RadarConfig& cfg, const TargetPolar& target, int n) {
    const double delta = phase_center_direction(cfg, n) - target.azimuth;
    return {range_from_center(cfg, delta, target.range), aspect_from_center(cfg, delta, target.range)};
}

ApertureWindow visibility_window_at(const RadarConfig& cfg, double azimuth, double range) {
    if (!(range > cfg.rotation_radius))
        throw std::domain_error("target range must exceed the rotation radius");
    ApertureWindow w;
    w.half_view = std::acos(cfg.rotation_radius / range);
    const double step = cfg.pulse_step();
    w.n_min = static_cast<int>(std::ceil((azimuth - w.half_view) / step));
    w.n_max = static_cast<int>(std::floor((azimuth + w.half_view) / step));
    return w;
}

ApertureWindow visibility_window(const RadarConfig& cfg, const TargetPolar& target) {
    return visibility_window_at(cfg, kPi / 2, target.range);
}

double SteeringVector::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += std::norm(e);
    return s;
}

double SteeringVector::norm() const { return std::sqrt(squared_norm()); }

SteeringVector steering_vector(const RadarConfig& cfg, double azimuth, double range,
                               const ApertureWindow& window) {
    if (window.empty()) throw std::invalid_argument("steering_vector: empty aperture window");
    SteeringVector sv;
    sv.window = window;
    sv.range = range;
    sv.entries.resize(static_cast<std::size_t>(window.length()));
    const double step = cfg.pulse_step();
    const double two_k = 2.0 * cfg.wavenumber();
    for (int n = window.n_min; n <= window.n_max; ++n) {
        const double delta = n * step - azimuth;
        const double gain = element_gain(cfg, aspect_from_center(cfg, delta, range));
        const double phase = two_k * range_from_center(cfg, delta, range);
        sv.entries[static_cast<std::size_t>(n - window.n_min)] =
            gain * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return sv;
}

} // namespace rosar
