#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssrc/baselines.hpp"
#include "ssrc/generators.hpp"
#include "ssrc/separation.hpp"
#include "ssrc/tuning.hpp"

namespace ssrc {

struct TunerSettings {
    SearchStrategy strategy = SearchStrategy::BayesOpt;
    int budget = 40;
    SearchSpace space;
};

/// One benchmark column: a signal and the SNR its noise is mixed at.
struct BenchColumn {
    SignalSpec signal;
    double snr_db = 0.0;
};

/// Config-file driven experiment description (JSON on disk; see README for the
/// schema). The same structure drives generate, bench and sweep runs.
struct ExperimentConfig {
    std::vector<BenchColumn> columns;
    NoiseSpec noise;  // family and shape; per-column SNR comes from `columns`
    std::size_t length = 9000;
    std::size_t validation_len = 1000;
    int realizations = 100;
    TunerSettings tuner;
    std::vector<FilterSpec> baselines;
    std::uint64_t base_seed = 1;
    NoiseEstimation noise_est = NoiseEstimation::Ratio;

    // sweep section
    std::vector<double> sweep_levels{0.14, 0.38, 0.96};
    std::vector<int> sweep_sizes{50, 100, 150, 200, 250, 300};
    int sweep_trials = 8;
};

/// The comparison set used throughout: soft/hard wavelet, 25/50/75% low-pass,
/// median, adaptive.
std::vector<FilterSpec> default_baselines();

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// FNV-1a of the canonical config serialization; embedded in every output file.
std::string config_hash(const ExperimentConfig& config);

/// Seed for one (column, realization) pair: base + column * realizations + trial.
std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t column, int trial);

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GeneratedFile {
    std::string filename;
    std::size_t column = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double measured_snr_db = 0.0;
};

/// Write one labeled CSV per (column, realization) plus manifest.json.
std::vector<GeneratedFile> run_generate(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchTrialRecord {
    std::size_t column = 0;
    int trial = 0;
    std::string method;
    bool ok = false;
    std::string error;
    double rmse_truth = 0.0;       // against the clean signal, validation range
    double rmse_validation = 0.0;  // against the observed series, validation range
    double jsd_noise = 0.0;        // estimated vs true noise distribution
    NoiseKind kind_estimated = NoiseKind::Undetermined;
    bool id_correct = false;       // after mapping Undetermined to Additive
    bool xi_histogram_bimodal = false;
};

struct BenchCellSummary {
    std::string method;
    std::size_t column = 0;
    double mean_rmse_truth = 0.0;
    double mean_jsd = 0.0;
    double id_accuracy = 0.0;
    double bimodal_fraction = 0.0;
    int n = 0;  // successful trials behind the means
};

struct BenchResult {
    std::vector<BenchTrialRecord> trials;  // sorted by (column, trial, method)
    std::vector<BenchCellSummary> table;
    std::vector<EsnParams> tuned_params;   // one per column
    double failure_fraction = 0.0;
};

/// Full benchmark matrix: per column, tune once on realization 0, then run the
/// tuned separator and every baseline over all realizations. Deterministic in
/// the config seed and independent of `jobs`.
BenchResult run_bench(const ExperimentConfig& config, int jobs);

void write_bench(const BenchResult& result, const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

SweepSpec sweep_spec_from_config(const ExperimentConfig& config);

void write_sweep(const SweepResult& result, const ExperimentConfig& config,
                 const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// separate (one user series)
// ---------------------------------------------------------------------------

struct SeparateOptions {
    bool tune = false;
    TunerSettings tuner;  // used when tune is set
    EsnParams params;     // used otherwise
    NoiseEstimation noise_est = NoiseEstimation::Ratio;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::optional<std::filesystem::path> model_out;  // dump the trained separator
};

struct SeparateOutput {
    SeparationResult result;  // on the standardized scale
    StandardizationParams standardization;
    std::optional<double> rmse_truth;  // filled when the input carries truth columns
    std::optional<double> jsd_noise;
};

SeparateOutput run_separate(const LabeledSeries& input, const SeparateOptions& options);

/// result.json plus reconstruction/noise CSVs under out_dir.
void write_separate(const SeparateOutput& output, const LabeledSeries& input,
                    const SeparateOptions& options, const std::filesystem::path& out_dir);

}  // namespace ssrc
