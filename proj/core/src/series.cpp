#include "ssrc/series.hpp"

#include <cmath>

#include "ssrc/errors.hpp"

namespace ssrc {

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Additive: return "additive";
        case NoiseKind::Multiplicative: return "multiplicative";
        case NoiseKind::Undetermined: return "undetermined";
    }
    return "?";
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double std_dev(std::span<const double> v) { return std::sqrt(variance(v)); }

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Split split_series(const TimeSeries& x, std::size_t validation_len) {
    if (x.size() < 2) throw ContractError("split_series: series must have at least 2 samples");
    if (validation_len == 0) throw ContractError("split_series: validation_len must be positive");
    const std::size_t total_end = x.size() - 1;
    if (validation_len >= total_end)
        throw ContractError("split_series: validation_len leaves no training data");
    return Split{total_end - validation_len, total_end};
}

std::pair<TimeSeries, StandardizationParams> standardize(const TimeSeries& x) {
    if (x.size() < 2) throw ContractError("standardize: series must have at least 2 samples");
    const double m = mean(x.span());
    const double s = std_dev(x.span());
    if (!(s > 0.0)) throw DegenerateInputError("standardize: series has zero variance");
    TimeSeries z;
    z.values.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z.values[i] = (x[i] - m) / s;
    return {std::move(z), StandardizationParams{m, s}};
}

TimeSeries destandardize(const TimeSeries& z, const StandardizationParams& p) {
    TimeSeries x;
    x.values.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x.values[i] = z[i] * p.std_dev + p.mean;
    return x;
}

}  // namespace ssrc
