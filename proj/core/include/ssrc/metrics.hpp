#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ssrc {

/// Root-mean-square error between two equal-length sequences.
double rmse(std::span<const double> a, std::span<const double> b);

/// Binned empirical distribution. Masses are normalized over in-range samples;
/// out-of-range samples are counted separately and carry no mass.
struct Histogram {
    std::vector<double> bin_edges;  // size n_bins + 1, strictly increasing
    std::vector<double> masses;     // size n_bins, sums to 1
    double out_of_range_mass = 0.0; // fraction of samples outside [edges.front(), edges.back()]

    std::size_t bins() const { return masses.size(); }
};

Histogram histogram(std::span<const double> samples, int n_bins,
                    std::optional<std::pair<double, double>> range = std::nullopt);

/// Jensen-Shannon divergence, base-2 logarithm, on a shared bin grid. Result in [0, 1].
double jsd(const Histogram& p, const Histogram& q);

/// Histogram both sample sets on a common grid spanning their pooled range.
std::pair<Histogram, Histogram> shared_histograms(std::span<const double> a,
                                                  std::span<const double> b, int n_bins = 50);

/// True when the sample histogram shows at least two separated modes: after a
/// light 1-2-1 smoothing, at least two strict local maxima reach 20% of the
/// tallest bin.
bool histogram_bimodal(std::span<const double> samples, int n_bins = 40);

}  // namespace ssrc
