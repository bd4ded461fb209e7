#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssrc/generators.hpp"
#include "ssrc/reservoir.hpp"
#include "ssrc/series.hpp"

namespace ssrc {

/// Hyperparameter box searched by optimize(). Reservoir size and ridge move on
/// a log scale, the rest uniformly. Fields not listed here (connectivity,
/// washout) are taken from `base`.
struct SearchSpace {
    std::pair<int, int> reservoir_size{50, 400};
    std::pair<double, double> spectral_radius{0.3, 1.2};
    std::pair<double, double> leak{0.02, 1.0};
    std::pair<double, double> ridge{1e-9, 1e-1};
    std::pair<double, double> input_scale{0.02, 1.0};
    EsnParams base;
};

enum class SearchStrategy { RandomSearch, BayesOpt };

struct Trial {
    EsnParams params;
    double validation_error = 0.0;
    double wall_time_s = 0.0;  // in-memory diagnostic; kept out of emitted files
    bool ok = false;
    std::string failure;
};

struct OptimizeResult {
    EsnParams best;
    double best_error = 0.0;
    std::vector<Trial> log;  // one entry per budgeted trial, failures included
};

using Objective = std::function<double(const EsnParams&)>;

/// Minimize `objective` over the space with the given trial budget.
/// RandomSearch draws i.i.d. points. BayesOpt spends 10 trials on random
/// warm-up, then fits a Gaussian-process surrogate (squared-exponential
/// kernel, length scale 0.2 on normalized coordinates, observation noise
/// 1e-6) and evaluates the expected-improvement maximizer over 1000 candidate
/// draws per step. Deterministic in `seed`; each trial's reservoir seed is
/// derived from (seed, trial index). `jobs` parallelizes random draws and the
/// warm-up batch without changing any result.
OptimizeResult optimize(const Objective& objective, const SearchSpace& space, int budget,
                        SearchStrategy strategy, std::uint64_t seed, int jobs = 1);

/// Standard objective: run the separation pipeline on x and report its
/// validation error.
OptimizeResult optimize(const TimeSeries& x, const Split& split, const SearchSpace& space,
                        int budget, SearchStrategy strategy, std::uint64_t seed, int jobs = 1);

// ---------------------------------------------------------------------------
// Reservoir-capacity sweep over noise levels
// ---------------------------------------------------------------------------

struct SweepSpec {
    SignalSpec signal;
    NoiseSpec noise;              // family parameters; SNR is derived from each level
    std::vector<double> levels;   // scaled noise standard deviations
    std::vector<int> sizes;       // reservoir sizes to test
    int trials_per_cell = 8;
    EsnParams base;               // non-size hyperparameters held fixed
    std::size_t length = 9000;
    std::size_t validation_len = 1000;
    std::uint64_t seed = 1;
};

struct SweepResult {
    std::vector<double> levels;
    std::vector<int> sizes;
    // Row-major [level][size] mean errors over trials.
    std::vector<std::vector<double>> validation_error;
    std::vector<std::vector<double>> truth_error;
    // Same grids shifted so each row's minimum sits at zero.
    std::vector<std::vector<double>> validation_error_normalized;
    std::vector<std::vector<double>> truth_error_normalized;
    // Per-level argmin sizes.
    std::vector<int> best_size_by_validation;
    std::vector<int> best_size_by_truth;
};

/// Mean truth/validation error per (noise level, reservoir size) cell, with
/// per-level optimal sizes. Deterministic in the spec seed and independent of
/// `jobs`.
SweepResult capacity_sweep(const SweepSpec& spec, int jobs = 1);

}  // namespace ssrc
