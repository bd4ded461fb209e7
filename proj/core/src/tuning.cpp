#include "ssrc/tuning.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>

#include "ssrc/errors.hpp"
#include "ssrc/metrics.hpp"
#include "ssrc/parallel.hpp"
#include "ssrc/rng.hpp"
#include "ssrc/separation.hpp"

namespace ssrc {

namespace {

constexpr int kDims = 5;
constexpr int kWarmup = 10;
constexpr int kCandidates = 1000;
constexpr double kLengthScale = 0.2;
constexpr double kObservationNoise = 1e-6;

using Point = std::array<double, kDims>;  // normalized [0,1]^5

EsnParams params_from_point(const Point& p, const SearchSpace& space) {
    EsnParams out = space.base;
    const double log_lo = std::log(space.reservoir_size.first);
    const double log_hi = std::log(space.reservoir_size.second);
    out.reservoir_size = static_cast<int>(std::lround(std::exp(log_lo + (log_hi - log_lo) * p[0])));
    out.reservoir_size = std::clamp(out.reservoir_size, space.reservoir_size.first,
                                    space.reservoir_size.second);
    out.spectral_radius = space.spectral_radius.first +
                          (space.spectral_radius.second - space.spectral_radius.first) * p[1];
    out.leak = space.leak.first + (space.leak.second - space.leak.first) * p[2];
    out.ridge = std::exp(std::log(space.ridge.first) +
                         (std::log(space.ridge.second) - std::log(space.ridge.first)) * p[3]);
    out.input_scale = space.input_scale.first +
                      (space.input_scale.second - space.input_scale.first) * p[4];
    return out;
}

void validate(const SearchSpace& space) {
    if (space.reservoir_size.first < 1 || space.reservoir_size.second < space.reservoir_size.first)
        throw ContractError("SearchSpace: bad reservoir_size interval");
    if (!(space.ridge.first > 0.0) || space.ridge.second < space.ridge.first)
        throw ContractError("SearchSpace: ridge interval must be positive (log scale)");
    const auto ordered = [](std::pair<double, double> r) { return r.second >= r.first; };
    if (!ordered(space.spectral_radius) || !ordered(space.leak) || !ordered(space.input_scale))
        throw ContractError("SearchSpace: empty interval");
}

Point draw_point(Rng& rng) {
    Point p;
    for (double& v : p) v = uniform01(rng);
    return p;
}

double sq_dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (int d = 0; d < kDims; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

// Gaussian-process posterior machinery on normalized coordinates with
// standardized observations; everything dense, budgets are tens of trials.
struct Surrogate {
    std::vector<Point> x;
    Eigen::LLT<Eigen::MatrixXd> chol;
    Eigen::VectorXd alpha;
    double y_mean = 0.0, y_scale = 1.0, best = 0.0;

    void fit(const std::vector<Point>& xs, const std::vector<double>& ys) {
        x = xs;
        const auto n = static_cast<Eigen::Index>(xs.size());
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) y[i] = ys[static_cast<std::size_t>(i)];
        y_mean = y.mean();
        y_scale = std::sqrt((y.array() - y_mean).square().sum() / std::max<double>(1, n - 1));
        if (!(y_scale > 1e-12)) y_scale = 1.0;
        y = (y.array() - y_mean) / y_scale;
        best = y.minCoeff();

        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) {
                const double v = std::exp(-sq_dist(x[static_cast<std::size_t>(i)],
                                                   x[static_cast<std::size_t>(j)]) /
                                          (2.0 * kLengthScale * kLengthScale));
                k(i, j) = v;
                k(j, i) = v;
            }
        k.diagonal().array() += kObservationNoise;
        chol.compute(k);
        alpha = chol.solve(y);
    }

    double expected_improvement(const Point& c) const {
        const auto n = static_cast<Eigen::Index>(x.size());
        Eigen::VectorXd kc(n);
        for (Eigen::Index i = 0; i < n; ++i)
            kc[i] = std::exp(-sq_dist(x[static_cast<std::size_t>(i)], c) /
                             (2.0 * kLengthScale * kLengthScale));
        const double mu = kc.dot(alpha);
        const Eigen::VectorXd v = chol.matrixL().solve(kc);
        const double var = std::max(1.0 + kObservationNoise - v.squaredNorm(), 1e-12);
        const double sd = std::sqrt(var);
        const double z = (best - mu) / sd;
        const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        return (best - mu) * cdf + sd * pdf;
    }
};

}  // namespace

OptimizeResult optimize(const Objective& objective, const SearchSpace& space, int budget,
                        SearchStrategy strategy, std::uint64_t seed, int jobs) {
    validate(space);
    if (budget < 5) throw ContractError("optimize: budget must be at least 5");

    std::vector<Trial> log(static_cast<std::size_t>(budget));
    const auto run_trial = [&](std::size_t t, const Point& p) {
        Trial& trial = log[t];
        trial.params = params_from_point(p, space);
        trial.params.seed = derive_seed(seed, t);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            trial.validation_error = objective(trial.params);
            trial.ok = std::isfinite(trial.validation_error);
            if (!trial.ok) trial.failure = "non-finite validation error";
        } catch (const std::exception& e) {
            trial.ok = false;
            trial.failure = e.what();
        }
        trial.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    Rng rng(derive_seed(seed, 0x0b75ULL));
    if (strategy == SearchStrategy::RandomSearch) {
        std::vector<Point> points(static_cast<std::size_t>(budget));
        for (auto& p : points) p = draw_point(rng);
        parallel_for(points.size(), jobs, [&](std::size_t t) { run_trial(t, points[t]); });
    } else {
        const auto warmup = static_cast<std::size_t>(std::min(kWarmup, budget));
        std::vector<Point> points(warmup);
        for (auto& p : points) p = draw_point(rng);
        parallel_for(warmup, jobs, [&](std::size_t t) { run_trial(t, points[t]); });

        std::vector<Point> xs;
        std::vector<double> ys;
        Surrogate gp;
        for (std::size_t t = warmup; t < static_cast<std::size_t>(budget); ++t) {
            xs.clear();
            ys.clear();
            for (std::size_t i = 0; i < t; ++i)
                if (log[i].ok) {
                    xs.push_back(points[i]);
                    ys.push_back(log[i].validation_error);
                }
            Point next;
            if (xs.empty()) {
                next = draw_point(rng);
            } else {
                gp.fit(xs, ys);
                double best_ei = -1.0;
                for (int c = 0; c < kCandidates; ++c) {
                    const Point cand = draw_point(rng);
                    const double ei = gp.expected_improvement(cand);
                    if (ei > best_ei) {
                        best_ei = ei;
                        next = cand;
                    }
                }
            }
            points.push_back(next);
            run_trial(t, next);
        }
    }

    OptimizeResult out;
    out.log = std::move(log);
    const Trial* best = nullptr;
    for (const Trial& t : out.log)
        if (t.ok && (!best || t.validation_error < best->validation_error)) best = &t;
    if (!best) {
        std::vector<std::string> causes;
        for (const Trial& t : out.log) causes.push_back(t.failure);
        throw OptimizationError("optimize: every trial failed", std::move(causes));
    }
    out.best = best->params;
    out.best_error = best->validation_error;
    return out;
}

OptimizeResult optimize(const TimeSeries& x, const Split& split, const SearchSpace& space,
                        int budget, SearchStrategy strategy, std::uint64_t seed, int jobs) {
    const Objective objective = [&x, &split](const EsnParams& params) {
        return ssrc_separate(x, params, split).validation_error;
    };
    return optimize(objective, space, budget, strategy, seed, jobs);
}

// ---------------------------------------------------------------------------

SweepResult capacity_sweep(const SweepSpec& spec, int jobs) {
    if (spec.levels.empty() || spec.sizes.empty())
        throw ContractError("capacity_sweep: empty level or size grid");
    if (spec.trials_per_cell < 1) throw ContractError("capacity_sweep: need at least one trial");

    const TimeSeries q = standardize(gen_signal(spec.signal, spec.length)).first;
    const Split split = split_series(q, spec.validation_len);

    const std::size_t n_levels = spec.levels.size();
    const std::size_t n_sizes = spec.sizes.size();
    const auto trials = static_cast<std::size_t>(spec.trials_per_cell);
    const std::size_t cells = n_levels * n_sizes;

    struct CellAccum {
        double val = 0.0, truth = 0.0;
    };
    std::vector<CellAccum> accum(cells * trials);
    std::vector<std::string> failures(cells * trials);

    parallel_for(cells * trials, jobs, [&](std::size_t task) {
        const std::size_t cell = task / trials;
        const std::size_t trial = task % trials;
        const std::size_t level_i = cell / n_sizes;
        const std::size_t size_i = cell % n_sizes;
        try {
            NoiseSpec noise = spec.noise;
            const LabeledSeries mixed =
                mix_at_noise_std(q, noise, spec.levels[level_i], spec.seed + trial);
            const auto [x_std, std_params] = standardize(mixed.observed);

            EsnParams params = spec.base;
            params.reservoir_size = spec.sizes[size_i];
            params.seed = derive_seed(spec.seed, 0xca9ac17eULL + trial);
            const SeparationResult sep = ssrc_separate(x_std, params, split);

            const TimeSeries q_hat = destandardize(sep.q_hat, std_params);
            const std::size_t v0 = split.train_end + 1;
            const std::size_t vn = split.total_end - split.train_end;
            accum[task].val = sep.validation_error;
            accum[task].truth = rmse({q_hat.values.data() + v0, vn}, {q.values.data() + v0, vn});
        } catch (const std::exception& e) {
            failures[task] = e.what();
        }
    });
    for (const auto& f : failures)
        if (!f.empty()) throw Error("capacity_sweep: trial failed: " + f);

    SweepResult out;
    out.levels = spec.levels;
    out.sizes = spec.sizes;
    out.validation_error.assign(n_levels, std::vector<double>(n_sizes, 0.0));
    out.truth_error.assign(n_levels, std::vector<double>(n_sizes, 0.0));
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double sv = 0.0, st = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            sv += accum[cell * trials + t].val;
            st += accum[cell * trials + t].truth;
        }
        out.validation_error[cell / n_sizes][cell % n_sizes] = sv / static_cast<double>(trials);
        out.truth_error[cell / n_sizes][cell % n_sizes] = st / static_cast<double>(trials);
    }

    const auto normalize = [](const std::vector<std::vector<double>>& grid) {
        auto shifted = grid;
        for (auto& row : shifted) {
            const double lo = *std::min_element(row.begin(), row.end());
            for (double& v : row) v -= lo;
        }
        return shifted;
    };
    out.validation_error_normalized = normalize(out.validation_error);
    out.truth_error_normalized = normalize(out.truth_error);

    const auto argmins = [&](const std::vector<std::vector<double>>& grid) {
        std::vector<int> best;
        for (const auto& row : grid) {
            const auto it = std::min_element(row.begin(), row.end());
            best.push_back(spec.sizes[static_cast<std::size_t>(it - row.begin())]);
        }
        return best;
    };
    out.best_size_by_validation = argmins(out.validation_error);
    out.best_size_by_truth = argmins(out.truth_error);
    return out;
}

}  // namespace ssrc
