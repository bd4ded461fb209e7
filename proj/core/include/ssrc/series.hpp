#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ssrc {

/// Ordered sequence of real samples, indexed 0..N.
struct TimeSeries {
    std::vector<double> values;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }

    std::span<const double> span() const { return values; }
};

enum class NoiseKind { Additive, Multiplicative, Undetermined };

const char* to_string(NoiseKind kind);

/// Observed series plus whatever ground truth is known about it.
struct LabeledSeries {
    TimeSeries observed;
    std::optional<TimeSeries> truth_signal;
    std::optional<TimeSeries> truth_noise;
    std::optional<NoiseKind> noise_kind_truth;
};

/// Train/validation boundary: training indices 0..train_end, validation train_end+1..total_end.
struct Split {
    std::size_t train_end = 0;   // K
    std::size_t total_end = 0;   // N
};

struct StandardizationParams {
    double mean = 0.0;
    double std_dev = 1.0;
};

/// Inclusive index range [first, last].
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const { return last - first + 1; }
};

double mean(std::span<const double> v);
/// Sample variance (N-1 denominator).
double variance(std::span<const double> v);
double std_dev(std::span<const double> v);

/// True iff every sample is finite.
bool all_finite(std::span<const double> v);

/// Reserve the trailing `validation_len` samples for validation.
Split split_series(const TimeSeries& x, std::size_t validation_len);

/// Shift/scale to sample mean 0 and sample standard deviation 1.
std::pair<TimeSeries, StandardizationParams> standardize(const TimeSeries& x);
TimeSeries destandardize(const TimeSeries& z, const StandardizationParams& p);

}  // namespace ssrc
