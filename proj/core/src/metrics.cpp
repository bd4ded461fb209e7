#include "ssrc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ssrc/errors.hpp"

namespace ssrc {

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("rmse: length mismatch");
    if (a.empty()) throw ContractError("rmse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

Histogram histogram(std::span<const double> samples, int n_bins,
                    std::optional<std::pair<double, double>> range) {
    if (samples.empty()) throw ContractError("histogram: empty samples");
    if (n_bins < 2) throw ContractError("histogram: need at least 2 bins");

    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
    } else {
        lo = *std::min_element(samples.begin(), samples.end());
        hi = *std::max_element(samples.begin(), samples.end());
    }
    if (!(hi > lo)) hi = lo + 1.0;  // all samples identical: give the single value a bin

    Histogram h;
    h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    const double width = (hi - lo) / n_bins;
    for (int b = 0; b <= n_bins; ++b) h.bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
    h.masses.assign(static_cast<std::size_t>(n_bins), 0.0);

    std::size_t in_range = 0, out_range = 0;
    for (double x : samples) {
        if (x < lo || x > hi) {
            ++out_range;
            continue;
        }
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= h.masses.size()) b = h.masses.size() - 1;  // x == hi lands in the last bin
        h.masses[b] += 1.0;
        ++in_range;
    }
    if (in_range == 0) throw DegenerateInputError("histogram: no samples inside range");
    for (double& m : h.masses) m /= static_cast<double>(in_range);
    h.out_of_range_mass = static_cast<double>(out_range) / static_cast<double>(samples.size());
    return h;
}

double jsd(const Histogram& p, const Histogram& q) {
    if (p.bin_edges != q.bin_edges) throw ContractError("jsd: histograms use different bin grids");
    double acc = 0.0;
    for (std::size_t b = 0; b < p.masses.size(); ++b) {
        const double pb = p.masses[b], qb = q.masses[b];
        const double mb = 0.5 * (pb + qb);
        // 0 log 0 := 0. One commutative sum per bin keeps jsd(p,q) == jsd(q,p)
        // bit-exact.
        const double from_p = pb > 0.0 ? 0.5 * pb * std::log2(pb / mb) : 0.0;
        const double from_q = qb > 0.0 ? 0.5 * qb * std::log2(qb / mb) : 0.0;
        acc += from_p + from_q;
    }
    return std::clamp(acc, 0.0, 1.0);
}

bool histogram_bimodal(std::span<const double> samples, int n_bins) {
    const Histogram h = histogram(samples, n_bins);
    const std::size_t n = h.masses.size();
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? h.masses[i - 1] : h.masses[i];
        const double right = i + 1 < n ? h.masses[i + 1] : h.masses[i];
        smooth[i] = 0.25 * left + 0.5 * h.masses[i] + 0.25 * right;
    }
    const double tallest = *std::max_element(smooth.begin(), smooth.end());
    int peaks = 0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (smooth[i] > smooth[i - 1] && smooth[i] > smooth[i + 1] && smooth[i] >= 0.2 * tallest)
            ++peaks;
    return peaks >= 2;
}

std::pair<Histogram, Histogram> shared_histograms(std::span<const double> a,
                                                  std::span<const double> b, int n_bins) {
    if (a.empty() || b.empty()) throw ContractError("shared_histograms: empty samples");
    const double lo = std::min(*std::min_element(a.begin(), a.end()),
                               *std::min_element(b.begin(), b.end()));
    const double hi = std::max(*std::max_element(a.begin(), a.end()),
                               *std::max_element(b.begin(), b.end()));
    return {histogram(a, n_bins, std::pair{lo, hi}), histogram(b, n_bins, std::pair{lo, hi})};
}

}  // namespace ssrc
