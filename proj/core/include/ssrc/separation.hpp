#pragma once

#include <utility>
#include <vector>

#include "ssrc/reservoir.hpp"
#include "ssrc/series.hpp"

namespace ssrc {

/// Which estimator recovers multiplicative noise samples from the misfits.
/// Ratio (x / q_hat) targets a mean-one noise model; Misfit (psi / q_hat)
/// estimates the deviation from one instead.
enum class NoiseEstimation { Ratio, Misfit };

/// Binned estimate of E[|misfit|] as a function of the reconstruction value.
/// Flat for additive noise; V-shaped through the origin for multiplicative.
struct ConditionalCurve {
    std::vector<double> bin_centers;
    std::vector<double> bin_means;        // mean |misfit| per retained bin
    std::vector<std::size_t> bin_counts;  // occupancy; bins under 10 samples are dropped
};

/// Everything the separation pipeline produces for one series.
struct SeparationResult {
    /// One-step reconstruction aligned with the input. Index 0 has no
    /// one-step predecessor and is copied from the input.
    TimeSeries q_hat;
    /// Misfits x_i - q_hat_i over training indices [psi_start, split.train_end].
    std::vector<double> psi;
    std::size_t psi_start = 0;
    NoiseKind noise_kind = NoiseKind::Undetermined;
    /// R^2(proportional) - R^2(flat) of the conditional curve, clamped to [-1,1].
    double kind_statistic = 0.0;
    /// Estimated noise samples and the series indices they were taken at.
    std::vector<double> xi_hat;
    std::vector<std::size_t> xi_index;
    double validation_error = 0.0;
    EsnParams params_used;
};

/// Identification thresholds on the model-comparison statistic.
inline constexpr double kKindThreshold = 0.2;
/// Default bin count for the conditional curve.
inline constexpr int kDefaultCurveBins = 25;
/// Misfit RMS below this (on a standardized series) means there is no noise
/// worth classifying; the pipeline reports Undetermined instead of guessing.
inline constexpr double kNoiseFloorRms = 0.02;
/// Fraction of smallest-|q_hat| indices dropped before ratio estimation.
inline constexpr double kRatioTrimFraction = 0.01;

/// psi_i = x_i - q_hat_i over the inclusive range.
std::vector<double> misfits(const TimeSeries& x, const TimeSeries& q_hat, IndexRange range);

/// Partition the q_hat range into n_bins equal-width bins and report the mean
/// |psi| of every bin holding at least 10 samples. Fewer than 5 surviving bins
/// is an error (not enough data to classify).
ConditionalCurve conditional_mean_curve(std::span<const double> psi,
                                        std::span<const double> q_hat, int n_bins);

/// Compare a flat model E|psi| = c against a proportional model E|psi| = C|q|
/// on the curve, weighted by bin counts. Statistic above +0.2 means
/// multiplicative, below -0.2 additive, otherwise undetermined.
std::pair<NoiseKind, double> identify_noise_kind(const ConditionalCurve& curve);

/// Extract noise samples at the indices of `range`.
/// Additive: xi_i = psi_i. Multiplicative: xi_i = x_i / q_hat_i (or psi/q_hat
/// under the Misfit convention) with the 1% smallest |q_hat| indices dropped.
/// Undetermined is a refusal: the caller has to pick a side first.
std::pair<std::vector<double>, std::vector<std::size_t>> estimate_noise(
    const TimeSeries& x, const TimeSeries& q_hat, NoiseKind kind, IndexRange range,
    NoiseEstimation convention = NoiseEstimation::Ratio);

/// RMSE between x and q_hat over the validation indices train_end+1..total_end.
double validation_error(const TimeSeries& x, const TimeSeries& q_hat, const Split& split);

/// Steps shared by the reservoir pipeline and the baseline harness once a
/// reconstruction exists: misfits, noise classification, noise extraction,
/// validation error. `washout` fixes the first evaluated training index.
SeparationResult finish_separation(const TimeSeries& x, TimeSeries q_hat, const Split& split,
                                   std::size_t washout,
                                   NoiseEstimation convention = NoiseEstimation::Ratio);

/// The full pipeline on a standardized series: train the readout on the
/// training range, reconstruct everywhere, classify the noise from the
/// training misfits, extract noise samples, and score the validation range.
/// For an Undetermined classification the noise samples fall back to the
/// misfits (the additive estimate, which is always available).
SeparationResult ssrc_separate(const TimeSeries& x, const EsnParams& params, const Split& split,
                               NoiseEstimation convention = NoiseEstimation::Ratio);

}  // namespace ssrc
