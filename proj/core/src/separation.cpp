#include "ssrc/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssrc/errors.hpp"
#include "ssrc/metrics.hpp"

namespace ssrc {

std::vector<double> misfits(const TimeSeries& x, const TimeSeries& q_hat, IndexRange range) {
    if (x.size() != q_hat.size()) throw ContractError("misfits: series lengths differ");
    if (range.last < range.first || range.last >= x.size())
        throw ContractError("misfits: range outside series");
    std::vector<double> out(range.count());
    for (std::size_t i = range.first; i <= range.last; ++i) out[i - range.first] = x[i] - q_hat[i];
    return out;
}

ConditionalCurve conditional_mean_curve(std::span<const double> psi,
                                        std::span<const double> q_hat, int n_bins) {
    if (psi.size() != q_hat.size())
        throw ContractError("conditional_mean_curve: psi and q_hat must be paired");
    if (n_bins < 5) throw ContractError("conditional_mean_curve: need at least 5 bins");
    if (psi.empty()) throw DegenerateInputError("conditional_mean_curve: no samples");

    const auto [lo_it, hi_it] = std::minmax_element(q_hat.begin(), q_hat.end());
    const double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo)) hi = lo + 1.0;
    const double width = (hi - lo) / n_bins;

    std::vector<double> sums(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        auto b = static_cast<std::size_t>((q_hat[i] - lo) / width);
        if (b >= sums.size()) b = sums.size() - 1;
        sums[b] += std::abs(psi[i]);
        counts[b] += 1;
    }

    ConditionalCurve curve;
    for (std::size_t b = 0; b < sums.size(); ++b) {
        if (counts[b] < 10) continue;
        curve.bin_centers.push_back(lo + width * (static_cast<double>(b) + 0.5));
        curve.bin_means.push_back(sums[b] / static_cast<double>(counts[b]));
        curve.bin_counts.push_back(counts[b]);
    }
    if (curve.bin_centers.size() < 5)
        throw DegenerateInputError("conditional_mean_curve: fewer than 5 occupied bins");
    return curve;
}

std::pair<NoiseKind, double> identify_noise_kind(const ConditionalCurve& curve) {
    const std::size_t n = curve.bin_centers.size();
    if (n == 0 || curve.bin_means.size() != n || curve.bin_counts.size() != n)
        throw ContractError("identify_noise_kind: malformed curve");

    double wsum = 0.0, mbar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        wsum += static_cast<double>(curve.bin_counts[i]);
        mbar += static_cast<double>(curve.bin_counts[i]) * curve.bin_means[i];
    }
    mbar /= wsum;

    // Flat model: weighted mean level. Proportional model: least-squares slope
    // of mean |psi| against |center| through the origin.
    double ss_flat = 0.0, num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = static_cast<double>(curve.bin_counts[i]);
        const double m = curve.bin_means[i];
        const double c = std::abs(curve.bin_centers[i]);
        ss_flat += w * (m - mbar) * (m - mbar);
        num += w * m * c;
        den += w * c * c;
    }
    const double slope = den > 0.0 ? num / den : 0.0;
    double ss_prop = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = static_cast<double>(curve.bin_counts[i]);
        const double r = curve.bin_means[i] - slope * std::abs(curve.bin_centers[i]);
        ss_prop += w * r * r;
    }

    // ss_flat is the total variance about the weighted mean, so the statistic
    // R^2(prop) - R^2(flat) collapses to 1 - ss_prop/ss_flat.
    const double scale = std::max(mbar * mbar * wsum, 1e-300);
    double statistic;
    if (ss_flat <= 1e-24 * scale)
        statistic = ss_prop <= 1e-24 * scale ? 0.0 : -1.0;
    else
        statistic = std::clamp(1.0 - ss_prop / ss_flat, -1.0, 1.0);

    NoiseKind kind = NoiseKind::Undetermined;
    if (statistic > kKindThreshold)
        kind = NoiseKind::Multiplicative;
    else if (statistic < -kKindThreshold)
        kind = NoiseKind::Additive;
    return {kind, statistic};
}

std::pair<std::vector<double>, std::vector<std::size_t>> estimate_noise(
    const TimeSeries& x, const TimeSeries& q_hat, NoiseKind kind, IndexRange range,
    NoiseEstimation convention) {
    if (x.size() != q_hat.size()) throw ContractError("estimate_noise: series lengths differ");
    if (range.last < range.first || range.last >= x.size())
        throw ContractError("estimate_noise: range outside series");
    if (kind == NoiseKind::Undetermined)
        throw ContractError("estimate_noise: noise kind undetermined; choose a model first");

    std::vector<double> values;
    std::vector<std::size_t> indices;
    if (kind == NoiseKind::Additive) {
        values.reserve(range.count());
        indices.reserve(range.count());
        for (std::size_t i = range.first; i <= range.last; ++i) {
            values.push_back(x[i] - q_hat[i]);
            indices.push_back(i);
        }
        return {std::move(values), std::move(indices)};
    }

    // Multiplicative: drop the smallest-|q_hat| 1% to keep the ratio bounded.
    std::vector<std::size_t> order(range.count());
    std::iota(order.begin(), order.end(), range.first);
    const std::size_t drop = static_cast<std::size_t>(
        kRatioTrimFraction * static_cast<double>(order.size()));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double qa = std::abs(q_hat[a]), qb = std::abs(q_hat[b]);
        return qa != qb ? qa < qb : a < b;
    });
    std::vector<std::size_t> kept(order.begin() + static_cast<std::ptrdiff_t>(drop), order.end());
    std::sort(kept.begin(), kept.end());

    values.reserve(kept.size());
    for (std::size_t i : kept) {
        const double num = convention == NoiseEstimation::Ratio ? x[i] : x[i] - q_hat[i];
        values.push_back(num / q_hat[i]);
    }
    return {std::move(values), std::move(kept)};
}

double validation_error(const TimeSeries& x, const TimeSeries& q_hat, const Split& split) {
    if (x.size() != q_hat.size()) throw ContractError("validation_error: series lengths differ");
    if (split.total_end != x.size() - 1 || split.train_end >= split.total_end)
        throw ContractError("validation_error: split does not match series");
    const std::span<const double> xs(x.values.data() + split.train_end + 1,
                                     split.total_end - split.train_end);
    const std::span<const double> qs(q_hat.values.data() + split.train_end + 1,
                                     split.total_end - split.train_end);
    return rmse(xs, qs);
}

SeparationResult finish_separation(const TimeSeries& x, TimeSeries q_hat, const Split& split,
                                   std::size_t washout, NoiseEstimation convention) {
    if (q_hat.size() != x.size()) throw ContractError("finish_separation: lengths differ");
    if (split.total_end != x.size() - 1)
        throw ContractError("finish_separation: split does not match series length");
    if (washout >= split.train_end)
        throw ContractError("finish_separation: washout must be below the training length");

    SeparationResult result;
    result.q_hat = std::move(q_hat);

    // Misfits over the post-washout training range.
    const IndexRange train_range{washout + 1, split.train_end};
    result.psi = misfits(x, result.q_hat, train_range);
    result.psi_start = train_range.first;

    // Classify, unless the misfits sit at the numerical noise floor.
    double psi_rms = 0.0;
    for (double p : result.psi) psi_rms += p * p;
    psi_rms = std::sqrt(psi_rms / static_cast<double>(result.psi.size()));
    if (psi_rms < kNoiseFloorRms) {
        result.noise_kind = NoiseKind::Undetermined;
        result.kind_statistic = 0.0;
    } else {
        const std::span<const double> qh(result.q_hat.values.data() + train_range.first,
                                         train_range.count());
        try {
            const auto curve = conditional_mean_curve(result.psi, qh, kDefaultCurveBins);
            std::tie(result.noise_kind, result.kind_statistic) = identify_noise_kind(curve);
        } catch (const DegenerateInputError&) {
            // A collapsed reconstruction (one near-constant value) gives the
            // curve nothing to bin over; there is no basis for a verdict.
            result.noise_kind = NoiseKind::Undetermined;
            result.kind_statistic = 0.0;
        }
    }

    // Noise samples. Undetermined falls back to the additive estimate.
    const NoiseKind effective = result.noise_kind == NoiseKind::Multiplicative
                                    ? NoiseKind::Multiplicative
                                    : NoiseKind::Additive;
    std::tie(result.xi_hat, result.xi_index) =
        estimate_noise(x, result.q_hat, effective, train_range, convention);

    result.validation_error = validation_error(x, result.q_hat, split);
    return result;
}

SeparationResult ssrc_separate(const TimeSeries& x, const EsnParams& params, const Split& split,
                               NoiseEstimation convention) {
    if (split.total_end != x.size() - 1)
        throw ContractError("ssrc_separate: split does not match series length");
    if (split.train_end == 0 || split.train_end >= split.total_end)
        throw ContractError("ssrc_separate: empty training or validation part");
    const auto washout = static_cast<std::size_t>(params.washout);
    if (params.washout < 0 || washout >= split.train_end)
        throw ContractError("ssrc_separate: washout must be below the training length");

    // Steps 1-2: fit the readout on the training range, reconstruct everywhere.
    const Reservoir reservoir = build_reservoir(params);
    const StateTrajectory trajectory = run_states(reservoir, params, x);
    const Eigen::Index first_col = static_cast<Eigen::Index>(washout);
    const Eigen::Index train_cols = static_cast<Eigen::Index>(split.train_end - washout);
    const std::span<const double> targets(x.values.data() + washout + 1,
                                          static_cast<std::size_t>(train_cols));
    const Readout readout = train_readout(
        trajectory.states.middleCols(first_col, train_cols), targets, params.ridge);

    const TimeSeries stepwise = reconstruct(readout, trajectory);
    TimeSeries q_hat;
    q_hat.values.resize(x.size());
    q_hat.values[0] = x[0];  // no one-step estimate exists for index 0
    std::copy(stepwise.values.begin(), stepwise.values.end(), q_hat.values.begin() + 1);

    // Steps 3-6.
    SeparationResult result = finish_separation(x, std::move(q_hat), split, washout, convention);
    result.params_used = params;
    return result;
}

}  // namespace ssrc
