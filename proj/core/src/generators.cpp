#include "ssrc/generators.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "ssrc/errors.hpp"
#include "ssrc/rng.hpp"

namespace ssrc {

const char* to_string(SignalFamily family) {
    switch (family) {
        case SignalFamily::Lorenz: return "lorenz";
        case SignalFamily::HighFreqSin: return "highfreq";
        case SignalFamily::MLogistic: return "mlogistic";
    }
    return "?";
}

const char* to_string(NoiseFamily family) {
    switch (family) {
        case NoiseFamily::Lognormal: return "lognormal";
        case NoiseFamily::BimodalGaussian: return "bimodal";
        case NoiseFamily::Gamma: return "gamma";
    }
    return "?";
}

// ---------------------------------------------------------------------------

namespace {

using State3 = std::array<double, 3>;

State3 lorenz_rhs(const LorenzParams& p, const State3& s) {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

State3 rk4_step(const LorenzParams& p, const State3& s) {
    const double h = p.dt;
    const State3 k1 = lorenz_rhs(p, s);
    const State3 s2{s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1], s[2] + 0.5 * h * k1[2]};
    const State3 k2 = lorenz_rhs(p, s2);
    const State3 s3{s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1], s[2] + 0.5 * h * k2[2]};
    const State3 k3 = lorenz_rhs(p, s3);
    const State3 s4{s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]};
    const State3 k4 = lorenz_rhs(p, s4);
    State3 out;
    for (int d = 0; d < 3; ++d)
        out[d] = s[d] + (h / 6.0) * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    return out;
}

}  // namespace

TimeSeries gen_lorenz(const LorenzParams& params, std::size_t n) {
    if (n < 2) throw ContractError("gen_lorenz: need n >= 2");
    if (!(params.dt > 0.0)) throw ContractError("gen_lorenz: dt must be positive");
    if (params.transient_skip < 0) throw ContractError("gen_lorenz: negative transient_skip");
    if (params.observe < 0 || params.observe > 2) throw ContractError("gen_lorenz: observe in {0,1,2}");

    TimeSeries out;
    out.values.reserve(n);
    State3 s = params.initial_state;
    const std::size_t total = static_cast<std::size_t>(params.transient_skip) + n;
    for (std::size_t i = 0; i < total; ++i) {
        if (i >= static_cast<std::size_t>(params.transient_skip))
            out.values.push_back(s[static_cast<std::size_t>(params.observe)]);
        s = rk4_step(params, s);
        for (double v : s)
            if (!std::isfinite(v) || std::abs(v) > 1e9)
                throw DivergenceError("gen_lorenz: trajectory diverged at step " + std::to_string(i));
    }
    return out;
}

TimeSeries gen_highfreq_sin(double amplitude, double period_samples, double phase, std::size_t n) {
    if (n < 2) throw ContractError("gen_highfreq_sin: need n >= 2");
    if (!(period_samples > 2.0))
        throw ContractError("gen_highfreq_sin: period_samples must exceed 2 (Nyquist)");
    TimeSeries out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] =
            amplitude * std::sin(2.0 * M_PI * static_cast<double>(i) / period_samples + phase);
    return out;
}

TimeSeries gen_mlogistic(double r, double memory, std::size_t n, double q0, double q1) {
    if (n < 2) throw ContractError("gen_mlogistic: need n >= 2");
    if (!(r > 0.0 && r <= 4.0)) throw ContractError("gen_mlogistic: r must be in (0,4]");
    if (!(memory >= 0.0 && memory < 1.0)) throw ContractError("gen_mlogistic: memory in [0,1)");
    if (!(q0 > 0.0 && q0 < 1.0 && q1 > 0.0 && q1 < 1.0))
        throw ContractError("gen_mlogistic: initial values must lie in (0,1)");

    constexpr std::size_t kTransient = 100;
    std::vector<double> q(kTransient + n);
    q[0] = q0;
    q[1] = q1;
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        q[i + 1] = (1.0 - memory) * r * q[i] * (1.0 - q[i]) + memory * q[i - 1];
        if (!(q[i + 1] >= -10.0 && q[i + 1] <= 10.0))
            throw DivergenceError("gen_mlogistic: iterate escaped [-10,10] at step " +
                                  std::to_string(i + 1));
    }
    TimeSeries out;
    out.values.assign(q.begin() + kTransient, q.end());
    return out;
}

TimeSeries gen_signal(const SignalSpec& spec, std::size_t n) {
    switch (spec.family) {
        case SignalFamily::Lorenz: return gen_lorenz(spec.lorenz, n);
        case SignalFamily::HighFreqSin:
            return gen_highfreq_sin(spec.sin_amplitude, spec.sin_period, spec.sin_phase, n);
        case SignalFamily::MLogistic:
            return gen_mlogistic(spec.mlog_r, spec.mlog_memory, n, spec.mlog_q0, spec.mlog_q1);
    }
    throw ContractError("gen_signal: unknown family");
}

// ---------------------------------------------------------------------------

namespace {

void validate(const NoiseSpec& spec) {
    switch (spec.family) {
        case NoiseFamily::Lognormal:
            if (!(spec.sigma_ln > 0.0)) throw ContractError("NoiseSpec: sigma_ln must be positive");
            break;
        case NoiseFamily::BimodalGaussian:
            if (!(spec.mode_offset > 0.0 && spec.mode_std > 0.0))
                throw ContractError("NoiseSpec: bimodal offset and std must be positive");
            break;
        case NoiseFamily::Gamma:
            if (!(spec.gamma_shape > 0.0)) throw ContractError("NoiseSpec: gamma shape must be positive");
            break;
    }
}

std::vector<double> draw_uniforms(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> u(n);
    for (double& v : u) v = uniform01(rng);
    return u;
}

// Gamma(k, scale 1/k) through the inverse regularized incomplete gamma. Using a
// fixed uniform draw keeps the samples continuous and monotone in k, which the
// SNR bisection in mix() relies on.
std::vector<double> gamma_from_uniforms(const std::vector<double>& u, double shape) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double p = u[i];
        if (p >= 1.0) p = std::nextafter(1.0, 0.0);
        out[i] = boost::math::gamma_p_inv(shape, p) / shape;
    }
    return out;
}

}  // namespace

TimeSeries sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
    validate(spec);
    if (n == 0) throw ContractError("sample_noise: n must be positive");
    TimeSeries out;
    out.values.resize(n);
    Rng rng(seed);
    switch (spec.family) {
        case NoiseFamily::Lognormal: {
            const double shift = std::exp(spec.sigma_ln * spec.sigma_ln / 2.0);
            for (double& v : out.values)
                v = std::exp(spec.sigma_ln * standard_normal(rng)) - shift;
            break;
        }
        case NoiseFamily::BimodalGaussian: {
            for (double& v : out.values) {
                const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
                v = sign * spec.mode_offset + spec.mode_std * standard_normal(rng);
            }
            break;
        }
        case NoiseFamily::Gamma: {
            out.values = gamma_from_uniforms(draw_uniforms(n, seed), spec.gamma_shape);
            break;
        }
    }
    return out;
}

double snr_db(const TimeSeries& q, const TimeSeries& noise_component) {
    if (q.size() != noise_component.size()) throw ContractError("snr_db: length mismatch");
    if (q.size() < 2) throw ContractError("snr_db: need at least 2 samples");
    const double vn = variance(noise_component.span());
    if (!(vn > 0.0)) throw DegenerateInputError("snr_db: noise variance is zero (infinite SNR)");
    return 10.0 * std::log10(variance(q.span()) / vn);
}

namespace {

LabeledSeries mix_additive(const TimeSeries& q, const NoiseSpec& spec, double target_noise_var,
                           std::uint64_t seed) {
    TimeSeries raw = sample_noise(spec, q.size(), seed);
    const double scale = std::sqrt(target_noise_var / variance(raw.span()));

    LabeledSeries out;
    out.observed.values.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out.observed.values[i] = q[i] + raw[i] * scale;
    // Store the noise as x - q so the additive identity holds bit-exactly.
    TimeSeries noise;
    noise.values.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) noise.values[i] = out.observed[i] - q[i];
    out.truth_signal = q;
    out.truth_noise = std::move(noise);
    out.noise_kind_truth = NoiseKind::Additive;
    return out;
}

LabeledSeries mix_multiplicative(const TimeSeries& q, const NoiseSpec& spec,
                                 double target_noise_var, std::uint64_t seed) {
    const auto u = draw_uniforms(q.size(), seed);
    const auto noise_var = [&](double shape) {
        const auto xi = gamma_from_uniforms(u, shape);
        std::vector<double> comp(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) comp[i] = q[i] * (xi[i] - 1.0);
        return variance(comp);
    };

    // var(q*(xi-1)) decreases in the shape k; log-space bisection.
    double lo = 1e-3, hi = 1e9;
    if (noise_var(lo) < target_noise_var || noise_var(hi) > target_noise_var)
        throw ConvergenceError("mix: requested SNR unreachable with gamma noise on this signal");
    double mid = spec.gamma_shape;
    for (int it = 0; it < 200; ++it) {
        mid = std::sqrt(lo * hi);
        const double v = noise_var(mid);
        if (std::abs(10.0 * std::log10(v / target_noise_var)) < 0.02) break;
        if (v > target_noise_var)
            lo = mid;
        else
            hi = mid;
    }

    const auto xi = gamma_from_uniforms(u, mid);
    LabeledSeries out;
    out.observed.values.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out.observed.values[i] = q[i] * xi[i];
    out.truth_signal = q;
    out.truth_noise = TimeSeries(xi);
    out.noise_kind_truth = NoiseKind::Multiplicative;
    return out;
}

}  // namespace

LabeledSeries mix(const TimeSeries& q, const NoiseSpec& spec, std::uint64_t seed) {
    validate(spec);
    if (q.size() < 2) throw ContractError("mix: need at least 2 samples");
    if (!std::isfinite(spec.target_snr_db)) throw ContractError("mix: target SNR must be finite");
    const double target_noise_var =
        variance(q.span()) / std::pow(10.0, spec.target_snr_db / 10.0);
    return spec.kind() == NoiseKind::Additive ? mix_additive(q, spec, target_noise_var, seed)
                                              : mix_multiplicative(q, spec, target_noise_var, seed);
}

LabeledSeries mix_at_noise_std(const TimeSeries& q, const NoiseSpec& spec, double noise_std,
                               std::uint64_t seed) {
    validate(spec);
    if (q.size() < 2) throw ContractError("mix_at_noise_std: need at least 2 samples");
    if (!(noise_std > 0.0)) throw ContractError("mix_at_noise_std: noise_std must be positive");
    const double target_noise_var = noise_std * noise_std;
    return spec.kind() == NoiseKind::Additive ? mix_additive(q, spec, target_noise_var, seed)
                                              : mix_multiplicative(q, spec, target_noise_var, seed);
}

}  // namespace ssrc
