#include "ssrc/baselines.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <complex>

#include "ssrc/errors.hpp"

namespace ssrc {

std::string FilterSpec::label() const {
    switch (kind) {
        case Kind::LowPass: return "lowpass" + std::to_string(static_cast<int>(fraction * 100.0 + 0.5));
        case Kind::Wavelet: return variant == WaveletVariant::Soft ? "wavelet_soft" : "wavelet_hard";
        case Kind::Median: return "median";
        case Kind::Adaptive: return "adaptive";
        case Kind::Identity: return "identity";
    }
    return "?";
}

TimeSeries lowpass(const TimeSeries& x, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ContractError("lowpass: fraction in (0,1)");
    if (x.size() < 2) throw ContractError("lowpass: need at least 2 samples");
    const std::size_t n = x.size();

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq;
    fft.fwd(freq, x.values);

    const double cutoff = fraction * static_cast<double>(n) / 2.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double f = static_cast<double>(std::min(k, n - k));
        if (f > cutoff + 1e-9) freq[k] = 0.0;
    }

    TimeSeries out;
    fft.inv(out.values, freq);
    out.values.resize(n);
    return out;
}

// ---------------------------------------------------------------------------
// Daubechies-4 (8-tap) orthonormal filter bank, periodic boundary handling.
// ---------------------------------------------------------------------------

namespace {

constexpr int kDbTaps = 8;
constexpr double kDb4[kDbTaps] = {
    0.23037781330885523,  0.71484657055254150,  0.63088076792959040, -0.02798376941698385,
    -0.18703481171888114, 0.03084138183598697,  0.03288301166698295, -0.01059740178499728};

double db4_high(int m) { return (m % 2 == 0 ? 1.0 : -1.0) * kDb4[kDbTaps - 1 - m]; }

void dwt_level(const std::vector<double>& x, std::vector<double>& approx,
               std::vector<double>& detail) {
    const std::size_t n = x.size();
    const std::size_t half = n / 2;
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0, d = 0.0;
        for (int m = 0; m < kDbTaps; ++m) {
            const double v = x[(2 * k + static_cast<std::size_t>(m)) % n];
            a += kDb4[m] * v;
            d += db4_high(m) * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

void idwt_level(const std::vector<double>& approx, const std::vector<double>& detail,
                std::vector<double>& x) {
    const std::size_t half = approx.size();
    const std::size_t n = 2 * half;
    x.assign(n, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (int m = 0; m < kDbTaps; ++m) {
            const std::size_t i = (2 * k + static_cast<std::size_t>(m)) % n;
            x[i] += kDb4[m] * approx[k] + db4_high(m) * detail[k];
        }
    }
}

double median_of(std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
}

}  // namespace

WaveletPyramid dwt_forward(std::span<const double> x, int levels) {
    if (levels < 1) throw ContractError("dwt_forward: need at least one level");
    const std::size_t block = std::size_t{1} << levels;
    if (x.size() < block || x.size() < kDbTaps || x.size() % block != 0)
        throw DegenerateInputError("dwt_forward: length must be a (large enough) multiple of 2^levels");

    WaveletPyramid out;
    out.details.resize(static_cast<std::size_t>(levels));
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> approx;
    for (int lv = 0; lv < levels; ++lv) {
        dwt_level(cur, approx, out.details[static_cast<std::size_t>(lv)]);
        cur = approx;
    }
    out.approx = std::move(cur);
    return out;
}

std::vector<double> dwt_inverse(const WaveletPyramid& pyramid) {
    if (pyramid.details.empty()) throw ContractError("dwt_inverse: empty pyramid");
    std::vector<double> rec = pyramid.approx;
    std::vector<double> next;
    for (std::size_t lv = pyramid.details.size(); lv-- > 0;) {
        if (pyramid.details[lv].size() != rec.size())
            throw ContractError("dwt_inverse: inconsistent band sizes");
        idwt_level(rec, pyramid.details[lv], next);
        rec = next;
    }
    return rec;
}

TimeSeries wavelet_denoise(const TimeSeries& x, WaveletVariant variant, int levels) {
    if (levels < 1) throw ContractError("wavelet_denoise: need at least one level");
    const std::size_t n = x.size();
    const std::size_t block = std::size_t{1} << levels;
    if (n < block || n < kDbTaps)
        throw DegenerateInputError("wavelet_denoise: series too short for the decomposition");

    // Pad to a multiple of 2^levels by edge replication; truncated after inverse.
    const std::size_t padded = ((n + block - 1) / block) * block;
    std::vector<double> cur(x.values);
    cur.resize(padded, x.values.back());

    WaveletPyramid pyramid = dwt_forward(cur, levels);

    // Universal threshold from the finest-scale details.
    std::vector<double> abs_d1(pyramid.details[0].size());
    for (std::size_t i = 0; i < abs_d1.size(); ++i) abs_d1[i] = std::abs(pyramid.details[0][i]);
    const double sigma = median_of(abs_d1) / 0.6745;
    const double threshold = sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));

    for (auto& level : pyramid.details) {
        for (double& d : level) {
            if (variant == WaveletVariant::Hard) {
                if (std::abs(d) <= threshold) d = 0.0;
            } else {
                d = d > threshold ? d - threshold : (d < -threshold ? d + threshold : 0.0);
            }
        }
    }

    std::vector<double> rec = dwt_inverse(pyramid);
    rec.resize(n);
    return TimeSeries(std::move(rec));
}

TimeSeries median_filter(const TimeSeries& x, int window) {
    if (window < 3 || window % 2 == 0)
        throw ContractError("median_filter: window must be odd and >= 3");
    if (x.empty()) throw ContractError("median_filter: empty series");
    const std::size_t n = x.size();
    const int h = window / 2;

    TimeSeries out;
    out.values.resize(n);
    std::vector<double> buf(static_cast<std::size_t>(window));
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = -h; j <= h; ++j) {
            const auto idx = std::clamp<std::ptrdiff_t>(
                static_cast<std::ptrdiff_t>(i) + j, 0, static_cast<std::ptrdiff_t>(n) - 1);
            buf[static_cast<std::size_t>(j + h)] = x.values[static_cast<std::size_t>(idx)];
        }
        out.values[i] = median_of(buf);
    }
    return out;
}

TimeSeries adaptive_filter(const TimeSeries& x, int half_width, int poly_order,
                           AdaptiveDiagnostics* diagnostics) {
    if (half_width < 1 || poly_order < 0 || half_width < poly_order + 1)
        throw ContractError("adaptive_filter: need half_width >= poly_order + 1");
    const std::size_t seg = 2 * static_cast<std::size_t>(half_width) + 1;
    if (x.size() < seg) throw ContractError("adaptive_filter: series shorter than one segment");
    const std::size_t n = x.size();

    // One shared basis on [-1,1]; drop the order if it is rank-deficient.
    int order = poly_order;
    Eigen::MatrixXd basis;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    for (;; --order) {
        basis.resize(static_cast<Eigen::Index>(seg), order + 1);
        for (std::size_t i = 0; i < seg; ++i) {
            const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(seg - 1);
            double p = 1.0;
            for (int c = 0; c <= order; ++c) {
                basis(static_cast<Eigen::Index>(i), c) = p;
                p *= t;
            }
        }
        qr.compute(basis);
        if (qr.rank() == order + 1 || order == 0) break;
    }

    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + seg <= n; s += static_cast<std::size_t>(half_width)) starts.push_back(s);
    if (starts.back() + seg < n) starts.push_back(n - seg);

    const auto fit_segment = [&](std::size_t s) {
        const Eigen::Map<const Eigen::VectorXd> y(x.values.data() + s,
                                                  static_cast<Eigen::Index>(seg));
        return Eigen::VectorXd(basis * qr.solve(y));
    };

    TimeSeries out;
    out.values.resize(n);
    Eigen::VectorXd prev = fit_segment(starts[0]);
    for (std::size_t i = 0; i < seg; ++i) out.values[i] = prev[static_cast<Eigen::Index>(i)];

    for (std::size_t k = 1; k < starts.size(); ++k) {
        const Eigen::VectorXd cur = fit_segment(starts[k]);
        const std::size_t ov_start = starts[k];
        const std::size_t ov_end = starts[k - 1] + seg;  // exclusive
        const std::size_t m = ov_end - ov_start;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = m > 1 ? 1.0 - static_cast<double>(j) / static_cast<double>(m - 1) : 0.5;
            const auto pi = static_cast<Eigen::Index>(ov_start + j - starts[k - 1]);
            const auto ci = static_cast<Eigen::Index>(j);
            out.values[ov_start + j] = w * prev[pi] + (1.0 - w) * cur[ci];
        }
        for (std::size_t i = ov_end; i < starts[k] + seg; ++i)
            out.values[i] = cur[static_cast<Eigen::Index>(i - starts[k])];
        prev = cur;
    }

    if (diagnostics)
        *diagnostics = AdaptiveDiagnostics{poly_order, order, starts.size()};
    return out;
}

TimeSeries apply_filter(const TimeSeries& x, const FilterSpec& spec) {
    switch (spec.kind) {
        case FilterSpec::Kind::LowPass: return lowpass(x, spec.fraction);
        case FilterSpec::Kind::Wavelet: return wavelet_denoise(x, spec.variant, spec.levels);
        case FilterSpec::Kind::Median: return median_filter(x, spec.window);
        case FilterSpec::Kind::Adaptive:
            return adaptive_filter(x, spec.half_width, spec.poly_order);
        case FilterSpec::Kind::Identity: return x;
    }
    throw ContractError("apply_filter: unknown filter kind");
}

SeparationResult run_baseline(const TimeSeries& x, const FilterSpec& spec, const Split& split,
                              int washout, NoiseEstimation convention) {
    if (washout < 0) throw ContractError("run_baseline: washout must be nonnegative");
    return finish_separation(x, apply_filter(x, spec), split,
                             static_cast<std::size_t>(washout), convention);
}

}  // namespace ssrc
