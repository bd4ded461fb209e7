#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ssrc/errors.hpp"
#include "ssrc/generators.hpp"
#include "ssrc/metrics.hpp"
#include "ssrc/rng.hpp"
#include "ssrc/separation.hpp"
#include "ssrc/series.hpp"

using namespace ssrc;

TEST_CASE("misfits basics") {
    TimeSeries x(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    TimeSeries same = x;
    for (double v : misfits(x, same, {0, 3})) CHECK(v == 0.0);

    TimeSeries shifted;
    for (double v : x.values) shifted.values.push_back(v - 1.0);
    for (double v : misfits(x, shifted, {1, 3})) CHECK(v == 1.0);

    TimeSeries wrong(std::vector<double>{0.0});
    CHECK_THROWS_AS(misfits(x, wrong, {0, 3}), ContractError);
    CHECK_THROWS_AS(misfits(x, same, {0, 9}), ContractError);
}

TEST_CASE("misfits recover additive noise under a perfect reconstruction") {
    Rng rng(1);
    TimeSeries q, x;
    std::vector<double> noise;
    for (int i = 0; i < 200; ++i) {
        q.values.push_back(standard_normal(rng));
        noise.push_back(0.3 * standard_normal(rng));
        x.values.push_back(q.values.back() + noise.back());
    }
    const auto psi = misfits(x, q, {0, 199});
    for (std::size_t i = 0; i < psi.size(); ++i)
        CHECK(psi[i] == doctest::Approx(noise[i]).epsilon(1e-12));
}

TEST_CASE("conditional curve is flat for independent noise") {
    Rng rng(2);
    std::vector<double> psi(100000), qh(100000);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        qh[i] = uniform_in(rng, -2.0, 2.0);
        psi[i] = 0.5 * (uniform01(rng) < 0.5 ? -1.0 : 1.0);  // constant magnitude
    }
    const ConditionalCurve curve = conditional_mean_curve(psi, qh, 25);
    const auto [lo, hi] = std::minmax_element(curve.bin_means.begin(), curve.bin_means.end());
    CHECK(*hi / *lo < 1.2);

    const auto [kind, stat] = identify_noise_kind(curve);
    CHECK(kind == NoiseKind::Additive);
    CHECK(stat <= -0.2);
}

TEST_CASE("conditional curve is V-shaped for proportional noise") {
    Rng rng(3);
    std::vector<double> psi(100000), qh(100000);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        qh[i] = uniform_in(rng, -2.0, 2.0);
        psi[i] = qh[i] * 0.4 * standard_normal(rng);
    }
    const ConditionalCurve curve = conditional_mean_curve(psi, qh, 25);

    // correlation between bin means and |center|
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    const double n = static_cast<double>(curve.bin_centers.size());
    for (std::size_t i = 0; i < curve.bin_centers.size(); ++i) {
        const double cx = std::abs(curve.bin_centers[i]);
        const double cy = curve.bin_means[i];
        sx += cx; sy += cy; sxx += cx * cx; syy += cy * cy; sxy += cx * cy;
    }
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(r > 0.95);

    const auto [kind, stat] = identify_noise_kind(curve);
    CHECK(kind == NoiseKind::Multiplicative);
    CHECK(stat > 0.2);
}

TEST_CASE("conditional curve needs enough data") {
    std::vector<double> psi(10, 1.0), qh(10, 0.0);
    CHECK_THROWS_AS(conditional_mean_curve(psi, qh, 20), DegenerateInputError);
    CHECK_THROWS_AS(conditional_mean_curve(psi, qh, 3), ContractError);
}

TEST_CASE("identify_noise_kind on exactly flat and exactly proportional curves") {
    ConditionalCurve flat;
    for (int i = 0; i < 10; ++i) {
        flat.bin_centers.push_back(-2.0 + 0.45 * i);
        flat.bin_means.push_back(0.7);
        flat.bin_counts.push_back(100);
    }
    const auto [kf, sf] = identify_noise_kind(flat);
    CHECK(kf == NoiseKind::Additive);
    CHECK(sf <= -0.2);

    ConditionalCurve vee;
    for (int i = 0; i < 10; ++i) {
        const double c = -2.0 + 0.45 * i;
        vee.bin_centers.push_back(c);
        vee.bin_means.push_back(0.9 * std::abs(c));
        vee.bin_counts.push_back(100);
    }
    const auto [kv, sv] = identify_noise_kind(vee);
    CHECK(kv == NoiseKind::Multiplicative);
    CHECK(sv > 0.2);

    // All-zero curve: both models fit perfectly; no verdict.
    ConditionalCurve zero = flat;
    for (double& m : zero.bin_means) m = 0.0;
    const auto [kz, sz] = identify_noise_kind(zero);
    CHECK(kz == NoiseKind::Undetermined);
    CHECK(sz == 0.0);
}

TEST_CASE("identification is at least 95% right on synthetic labeled curves") {
    // Synthetic additive/multiplicative misfit samples at SNR-0dB-like scales.
    int correct = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        Rng rng(1000 + static_cast<std::uint64_t>(t));
        const bool multiplicative = t % 2 == 1;
        std::vector<double> psi(20000), qh(20000);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            qh[i] = standard_normal(rng);
            const double eta = standard_normal(rng);
            psi[i] = multiplicative ? qh[i] * eta : eta;
        }
        const auto curve = conditional_mean_curve(psi, qh, 25);
        const auto [kind, stat] = identify_noise_kind(curve);
        const NoiseKind expected =
            multiplicative ? NoiseKind::Multiplicative : NoiseKind::Additive;
        correct += kind == expected;
    }
    CHECK(correct >= 95);
}

TEST_CASE("estimate_noise additive and multiplicative identities") {
    Rng rng(4);
    TimeSeries q, x_add, x_mul;
    std::vector<double> noise_add, noise_mul;
    for (int i = 0; i < 4000; ++i) {
        const double qv = standard_normal(rng) + 3.0;  // bounded away from zero
        q.values.push_back(qv);
        noise_add.push_back(0.2 * standard_normal(rng));
        noise_mul.push_back(std::exp(0.2 * standard_normal(rng)));
        x_add.values.push_back(qv + noise_add.back());
        x_mul.values.push_back(qv * noise_mul.back());
    }

    const auto [add_vals, add_idx] =
        estimate_noise(x_add, q, NoiseKind::Additive, {0, 3999});
    REQUIRE(add_vals.size() == 4000);
    for (std::size_t i = 0; i < add_vals.size(); ++i)
        CHECK(add_vals[i] == doctest::Approx(noise_add[i]).epsilon(1e-12));

    const auto [mul_vals, mul_idx] =
        estimate_noise(x_mul, q, NoiseKind::Multiplicative, {0, 3999});
    CHECK(mul_vals.size() == 4000 - 40);  // 1% trimmed
    for (std::size_t k = 0; k < mul_vals.size(); ++k)
        CHECK(mul_vals[k] == doctest::Approx(noise_mul[mul_idx[k]]).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_noise(x_add, q, NoiseKind::Undetermined, {0, 3999}), ContractError);
}

TEST_CASE("estimate_noise trims the smallest magnitude reconstructions") {
    TimeSeries x, q;
    for (int i = 0; i < 200; ++i) {
        q.values.push_back(i == 50 ? 1e-9 : 1.0 + 0.001 * i);
        x.values.push_back(2.0 * q.values.back());
    }
    const auto [vals, idx] = estimate_noise(x, q, NoiseKind::Multiplicative, {0, 199});
    CHECK(vals.size() == 198);  // floor(0.01 * 200) = 2 dropped
    for (std::size_t k : idx) CHECK(k != 50);
    for (double v : vals) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("misfit convention estimates the deviation from one") {
    TimeSeries x, q;
    for (int i = 0; i < 300; ++i) {
        q.values.push_back(2.0 + 0.01 * i);
        x.values.push_back(q.values.back() * 1.5);
    }
    const auto [vals, idx] =
        estimate_noise(x, q, NoiseKind::Multiplicative, {0, 299}, NoiseEstimation::Misfit);
    for (double v : vals) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("validation_error basics") {
    TimeSeries x;
    for (int i = 0; i < 100; ++i) x.values.push_back(std::sin(0.3 * i));
    const Split split{79, 99};
    CHECK(validation_error(x, x, split) == 0.0);

    TimeSeries off;
    for (double v : x.values) off.values.push_back(v + 1.0);
    CHECK(validation_error(x, off, split) == doctest::Approx(1.0));
}

TEST_CASE("pipeline on a noise-free sinusoid: tiny error, no verdict") {
    const TimeSeries q = standardize(gen_highfreq_sin(1.0, 5.5, 0.0, 4000)).first;
    const Split split = split_series(q, 600);
    EsnParams params;
    params.reservoir_size = 200;
    params.seed = 31;
    const SeparationResult result = ssrc_separate(q, params, split);
    CHECK(result.validation_error < 0.01);
    CHECK(result.noise_kind == NoiseKind::Undetermined);
    CHECK(std::abs(result.kind_statistic) < 0.2);
    double psi_amp = 0.0;
    for (double p : result.psi) psi_amp = std::max(psi_amp, std::abs(p));
    CHECK(psi_amp < 0.1);
    // Undetermined falls back to the additive estimate.
    CHECK(result.xi_hat.size() == result.psi.size());
}

TEST_CASE("pipeline is deterministic") {
    const TimeSeries q = standardize(gen_mlogistic(4.0, 0.3, 2500)).first;
    NoiseSpec spec;
    spec.family = NoiseFamily::Lognormal;
    spec.target_snr_db = 10.0;
    const TimeSeries x = standardize(mix(q, spec, 8).observed).first;
    const Split split = split_series(x, 400);
    EsnParams params;
    params.reservoir_size = 120;
    params.seed = 9;
    const SeparationResult a = ssrc_separate(x, params, split);
    const SeparationResult b = ssrc_separate(x, params, split);
    CHECK(a.q_hat.values == b.q_hat.values);
    CHECK(a.psi == b.psi);
    CHECK(a.xi_hat == b.xi_hat);
    CHECK(a.validation_error == b.validation_error);
    CHECK(a.noise_kind == b.noise_kind);
}

TEST_CASE("identification is scale invariant") {
    const TimeSeries q = standardize(gen_mlogistic(4.0, 0.3, 3000)).first;
    NoiseSpec spec;
    spec.family = NoiseFamily::Gamma;
    spec.target_snr_db = 9.0;
    const LabeledSeries mixed = mix(q, spec, 12);
    const Split split = split_series(mixed.observed, 500);
    EsnParams params;
    params.reservoir_size = 150;
    params.seed = 13;

    const TimeSeries x1 = standardize(mixed.observed).first;
    TimeSeries scaled;
    for (double v : mixed.observed.values) scaled.values.push_back(7.5 * v);
    const TimeSeries x2 = standardize(scaled).first;

    const SeparationResult r1 = ssrc_separate(x1, params, split);
    const SeparationResult r2 = ssrc_separate(x2, params, split);
    CHECK(r1.noise_kind == r2.noise_kind);
}

TEST_CASE("multiplicative mixes classify correctly in at least 95 of 100 trials") {
    const TimeSeries q = standardize(gen_mlogistic(4.0, 0.3, 4500)).first;
    const Split split = split_series(q, 500);
    // Gamma shape 10^0.9 gives a 9 dB mix on a unit-variance signal.
    NoiseSpec spec;
    spec.family = NoiseFamily::Gamma;
    spec.gamma_shape = std::pow(10.0, 0.9);

    int correct = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const TimeSeries xi = sample_noise(spec, q.size(), 500 + static_cast<std::uint64_t>(t));
        TimeSeries x;
        for (std::size_t i = 0; i < q.size(); ++i) x.values.push_back(q[i] * xi[i]);
        const TimeSeries x_std = standardize(x).first;
        EsnParams params;
        params.reservoir_size = 100;
        params.seed = 900 + static_cast<std::uint64_t>(t);
        const SeparationResult r = ssrc_separate(x_std, params, split);
        correct += r.noise_kind == NoiseKind::Multiplicative;
    }
    CHECK(correct >= 95);
}

TEST_CASE("step-5 consistency: additive mean matches, multiplicative mean near one") {
    const TimeSeries q = standardize(gen_mlogistic(4.0, 0.3, 4000)).first;
    const Split split = split_series(q, 500);
    EsnParams params;
    params.reservoir_size = 150;
    params.seed = 41;

    NoiseSpec add;
    add.family = NoiseFamily::Lognormal;
    add.target_snr_db = 6.0;
    const TimeSeries xa = standardize(mix(q, add, 51).observed).first;
    const SeparationResult ra = ssrc_separate(xa, params, split);
    REQUIRE(ra.noise_kind == NoiseKind::Additive);
    CHECK(mean(ra.xi_hat) == doctest::Approx(mean(ra.psi)).epsilon(1e-12));

    NoiseSpec mul;
    mul.family = NoiseFamily::Gamma;
    mul.target_snr_db = 9.0;
    const LabeledSeries mixed = mix(q, mul, 52);
    // Ratio estimation on the original (uncentered) scale.
    const auto [x_std, std_params] = standardize(mixed.observed);
    const SeparationResult rm = ssrc_separate(x_std, params, split);
    REQUIRE(rm.noise_kind == NoiseKind::Multiplicative);
    const TimeSeries q_hat = destandardize(rm.q_hat, std_params);
    const auto [vals, idx] = estimate_noise(mixed.observed, q_hat, NoiseKind::Multiplicative,
                                            {rm.psi_start, split.train_end});
    const double m = mean(vals);
    CHECK(m > 0.8);
    CHECK(m < 1.2);
}
