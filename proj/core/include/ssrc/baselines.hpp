#pragma once

#include <string>

#include "ssrc/separation.hpp"
#include "ssrc/series.hpp"

namespace ssrc {

enum class WaveletVariant { Soft, Hard };

/// A comparison filter. All baselines are pure functions of (x, spec).
struct FilterSpec {
    enum class Kind { LowPass, Wavelet, Median, Adaptive, Identity } kind = Kind::LowPass;
    double fraction = 0.25;                         // low-pass: kept fraction of the Nyquist band
    WaveletVariant variant = WaveletVariant::Soft;  // wavelet: thresholding rule
    int levels = 4;                                 // wavelet: decomposition depth
    int window = 5;                                 // median: odd window length
    int half_width = 10;                            // adaptive: n, segment length 2n+1
    int poly_order = 3;                             // adaptive: M

    std::string label() const;
};

/// Brick-wall FFT low-pass: bins with frequency index above fraction * Nyquist
/// are zeroed, the rest pass untouched.
TimeSeries lowpass(const TimeSeries& x, double fraction);

/// Multi-level periodic Daubechies-4 analysis. Detail bands are ordered
/// finest first. The input length must be divisible by 2^levels.
struct WaveletPyramid {
    std::vector<double> approx;
    std::vector<std::vector<double>> details;
};

WaveletPyramid dwt_forward(std::span<const double> x, int levels);
std::vector<double> dwt_inverse(const WaveletPyramid& pyramid);

/// Daubechies-4 wavelet denoising with periodic extension and the universal
/// threshold sigma_hat * sqrt(2 ln n), sigma_hat = median(|d1|)/0.6745.
/// Soft thresholding shrinks detail coefficients, hard zeroes them. Lengths
/// that do not divide 2^levels are edge-padded and truncated back.
TimeSeries wavelet_denoise(const TimeSeries& x, WaveletVariant variant, int levels = 4);

/// Sliding median with edge replication.
TimeSeries median_filter(const TimeSeries& x, int window);

struct AdaptiveDiagnostics {
    int requested_order = 0;
    int effective_order = 0;  // lowered when the fit basis is rank-deficient
    std::size_t segments = 0;
};

/// Overlapping-segment polynomial smoother: segments of length 2n+1 with
/// overlap n+1, least-squares polynomial of order M per segment, overlaps
/// merged with linearly decaying weights.
TimeSeries adaptive_filter(const TimeSeries& x, int half_width, int poly_order,
                           AdaptiveDiagnostics* diagnostics = nullptr);

TimeSeries apply_filter(const TimeSeries& x, const FilterSpec& spec);

/// Run a baseline filter through the same misfit / identification / noise
/// estimation / validation steps as the reservoir pipeline, so results are
/// directly comparable. `washout` aligns the evaluated ranges.
SeparationResult run_baseline(const TimeSeries& x, const FilterSpec& spec, const Split& split,
                              int washout = 100,
                              NoiseEstimation convention = NoiseEstimation::Ratio);

}  // namespace ssrc
