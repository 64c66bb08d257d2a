// SPDX-License-Identifier: Apache-2.0
#include "rosar/signal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "rosar/parallel.hpp"
#include "rosar/rng.hpp"

namespace rosar {

DataMatrix simulate_if(const RadarConfig& cfg, const PointScene& scene, const JitterModel& jitter,
                       int threads) {
    cfg.validate();
    const int n_pulses = cfg.pulses_per_rev;
    const int m_samples = cfg.samples_per_pulse;

    DataMatrix out;
    out.kind = DataKind::IF;
    out.rows = m_samples;
    out.pulses = n_pulses;
    out.data.assign(static_cast<std::size_t>(m_samples) * n_pulses, {0.0, 0.0});
    out.pulse_azimuths.resize(static_cast<std::size_t>(n_pulses));

    const double t_s = cfg.sample_interval();
    const double t_start = cfg.sample_start_s;
    const double slope = cfg.chirp_slope;
    const double carrier = cfg.carrier_hz;
    const double c = cfg.wave_speed;
    const double noise_sigma = std::sqrt(scene.noise_power);

    parallel_for(n_pulses, threads, [&](long long pulse) {
        const int n = static_cast<int>(pulse);
        Rng jitter_rng(jitter.seed, "jitter", static_cast<std::uint64_t>(n));
        const double nominal = kTwoPi * n / n_pulses;
        const double azimuth =
            jitter.sigma_rad > 0.0 ? nominal + jitter.sigma_rad * jitter_rng.gaussian() : nominal;
        out.pulse_azimuths[static_cast<std::size_t>(n)] = azimuth;

        std::complex<double>* col = out.data.data() + static_cast<std::size_t>(n) * m_samples;
        for (const PointTarget& target : scene.targets) {
            const double delta = azimuth - target.position.azimuth;
            const double theta = aspect_from_center(cfg, delta, target.position.range);
            const double gain = element_gain(cfg, theta);
            if (gain == 0.0) continue;
            const double range = range_from_center(cfg, delta, target.position.range);
            const double tau = 2.0 * range / c;
            const std::complex<double> amp = gain * target.reflectivity;
            // phase(m) = 2*pi*(tau*K*(m*t_s + T_start) + f_c*tau); advance by a unit phasor.
            const double phase0 = kTwoPi * (tau * slope * t_start + carrier * tau);
            const double phase_step = kTwoPi * tau * slope * t_s;
            std::complex<double> phasor(std::cos(phase0), std::sin(phase0));
            const std::complex<double> step(std::cos(phase_step), std::sin(phase_step));
            for (int m = 0; m < m_samples; ++m) {
                col[m] += amp * phasor;
                phasor *= step;
            }
        }
        if (noise_sigma > 0.0) {
            Rng noise_rng(jitter.seed, "noise", static_cast<std::uint64_t>(n));
            for (int m = 0; m < m_samples; ++m) col[m] += noise_sigma * noise_rng.complex_gaussian();
        }
    });
    return out;
}

namespace {
std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe
}

DataMatrix range_fft(const DataMatrix& matrix, const RadarConfig& cfg) {
    if (matrix.kind != DataKind::IF)
        throw std::invalid_argument("range_fft expects an IF data matrix");
    if (matrix.rows != cfg.samples_per_pulse)
        throw std::invalid_argument("range_fft: data row count does not match samples_per_pulse");
    const int len = cfg.range_bins;

    DataMatrix out;
    out.kind = DataKind::RangeCompressed;
    out.rows = len;
    out.pulses = matrix.pulses;
    out.data.assign(static_cast<std::size_t>(len) * matrix.pulses, {0.0, 0.0});
    out.pulse_azimuths = matrix.pulse_azimuths;

    std::vector<std::complex<double>> buf_in(static_cast<std::size_t>(len));
    std::vector<std::complex<double>> buf_out(static_cast<std::size_t>(len));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(len, reinterpret_cast<fftw_complex*>(buf_in.data()),
                                reinterpret_cast<fftw_complex*>(buf_out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    for (int p = 0; p < matrix.pulses; ++p) {
        const std::complex<double>* col = matrix.column(p);
        std::copy(col, col + matrix.rows, buf_in.begin());
        std::fill(buf_in.begin() + matrix.rows, buf_in.end(), std::complex<double>{0.0, 0.0});
        fftw_execute(plan);
        std::copy(buf_out.begin(), buf_out.end(),
                  out.data.begin() + static_cast<std::size_t>(p) * len);
    }
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    return out;
}

int range_bin_of(const RadarConfig& cfg, double R) {
    if (R < 0.0 || R >= cfg.max_unambiguous_range())
        throw std::domain_error("range outside [0, max unambiguous range)");
    return static_cast<int>(
        std::lround(2.0 * R * cfg.chirp_slope * cfg.sample_interval() * cfg.range_bins /
                    cfg.wave_speed));
}

double bin_center_range(const RadarConfig& cfg, int bin) {
    return bin * cfg.wave_speed / (2.0 * cfg.chirp_slope * cfg.sample_interval() * cfg.range_bins);
}

std::vector<double> sample_phase_errors(const RadarConfig& cfg, const JitterModel& jitter,
                                        double R, int draws) {
    if (draws < 1) throw std::invalid_argument("sample_phase_errors: draws must be >= 1");
    const ApertureWindow window = visibility_window_at(cfg, kPi / 2, R);
    const SteeringVector nominal = steering_vector(cfg, kPi / 2, R, window);
    const double step = cfg.pulse_step();
    const double two_k = 2.0 * cfg.wavenumber();

    std::vector<double> norms(static_cast<std::size_t>(draws));
    parallel_for(draws, 0, [&](long long d) {
        Rng rng(jitter.seed, "calibration", static_cast<std::uint64_t>(d));
        double acc = 0.0;
        for (int n = window.n_min; n <= window.n_max; ++n) {
            const double phi_hat = n * step + jitter.sigma_rad * rng.gaussian();
            const double delta = phi_hat - kPi / 2;
            const double gain = element_gain(cfg, aspect_from_center(cfg, delta, R));
            const double phase = two_k * range_from_center(cfg, delta, R);
            const std::complex<double> perturbed =
                gain * std::complex<double>(std::cos(phase), std::sin(phase));
            acc += std::norm(perturbed - nominal.entries[static_cast<std::size_t>(n - window.n_min)]);
        }
        norms[static_cast<std::size_t>(d)] = std::sqrt(acc);
    });
    return norms;
}

} // namespace rosar
