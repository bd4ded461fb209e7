#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "ssrc/series.hpp"

namespace ssrc {

// ---------------------------------------------------------------------------
// Deterministic signal generators
// ---------------------------------------------------------------------------

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double dt = 0.015;
    std::array<double, 3> initial_state{1.0, 1.0, 1.0};
    int observe = 0;  // 0=x, 1=y, 2=z
    int transient_skip = 1000;
};

/// Sample one coordinate of the Lorenz system, integrated with classical RK4.
TimeSeries gen_lorenz(const LorenzParams& params, std::size_t n);

/// q_i = amplitude * sin(2*pi*i/period_samples + phase). period_samples must exceed 2.
TimeSeries gen_highfreq_sin(double amplitude, double period_samples, double phase, std::size_t n);

/// Logistic map with a convex memory term:
///   q_{i+1} = (1-memory) * r * q_i * (1-q_i) + memory * q_{i-1}
/// The first 100 iterates are discarded as transient.
TimeSeries gen_mlogistic(double r, double memory, std::size_t n, double q0 = 0.2, double q1 = 0.3);

/// One of the three test signals, for config-driven runs.
enum class SignalFamily { Lorenz, HighFreqSin, MLogistic };

struct SignalSpec {
    SignalFamily family = SignalFamily::Lorenz;
    LorenzParams lorenz;
    double sin_amplitude = 1.0;
    double sin_period = 5.5;
    double sin_phase = 0.0;
    double mlog_r = 4.0;
    double mlog_memory = 0.3;
    double mlog_q0 = 0.2;
    double mlog_q1 = 0.3;
};

TimeSeries gen_signal(const SignalSpec& spec, std::size_t n);
const char* to_string(SignalFamily family);

// ---------------------------------------------------------------------------
// Noise samplers and mixing
// ---------------------------------------------------------------------------

enum class NoiseFamily { Lognormal, BimodalGaussian, Gamma };

/// Noise description. Lognormal and bimodal are additive (mean 0); gamma is
/// multiplicative (mean 1, shape solved from the SNR target when mixing).
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::Lognormal;
    double sigma_ln = 0.5;      // lognormal log-scale
    double mode_offset = 1.0;   // bimodal: modes at +-mode_offset
    double mode_std = 0.25;     // bimodal: per-component std
    double gamma_shape = 4.0;   // gamma: shape k (scale fixed at 1/k)
    double target_snr_db = 0.0;

    NoiseKind kind() const {
        return family == NoiseFamily::Gamma ? NoiseKind::Multiplicative : NoiseKind::Additive;
    }
};

const char* to_string(NoiseFamily family);

/// Reproducible noise draw: equal (spec, n, seed) gives a bit-identical series.
///   lognormal: exp(N(0, sigma_ln^2)) - exp(sigma_ln^2/2)   (mean 0)
///   bimodal:   equal mixture of N(-c, s^2) and N(+c, s^2)  (mean 0)
///   gamma:     Gamma(k, scale 1/k)                          (mean 1)
TimeSeries sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed);

/// 10*log10(var(q)/var(noise)), sample variances.
double snr_db(const TimeSeries& q, const TimeSeries& noise_component);

/// Corrupt a standardized signal at the spec's target SNR.
/// Additive: the noise draw is rescaled so the measured SNR hits the target to
/// 0.01 dB, then x = q + noise. Multiplicative: the gamma shape is solved by
/// bisection so var(q*(xi-1)) matches the target to 0.05 dB, then x = q .* xi.
LabeledSeries mix(const TimeSeries& q, const NoiseSpec& spec, std::uint64_t seed);

/// Additive variant pinning the scaled noise standard deviation instead of SNR.
LabeledSeries mix_at_noise_std(const TimeSeries& q, const NoiseSpec& spec, double noise_std,
                               std::uint64_t seed);

}  // namespace ssrc
