// Command line front end: generate datasets, separate a user series, run the
// benchmark matrix, or run the reservoir-capacity sweep. Everything is driven
// by a JSON config plus a few overriding flags; outputs are CSV/JSON.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <string>

#include "ssrc/csv.hpp"
#include "ssrc/errors.hpp"
#include "ssrc/experiment.hpp"
#include "ssrc/parallel.hpp"

namespace {

// Exit codes: 0 ok, 1 internal, 2 parse, 3 degenerate input, 4 optimization
// failure, 5 too many benchmark trial failures.
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitOptimization = 4;
constexpr int kExitBenchFailures = 5;

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int jobs = ssrc::default_jobs();
    std::string noise_est = "ratio";
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "override the config base seed");
    cmd->add_option("--jobs", flags.jobs, "worker threads (default: all cores)");
    cmd->add_option("--noise-est", flags.noise_est, "multiplicative noise estimator")
        ->check(CLI::IsMember({"ratio", "misfit"}));
}

ssrc::ExperimentConfig load_with_overrides(const CommonFlags& flags) {
    ssrc::ExperimentConfig cfg = ssrc::load_config(flags.config_path);
    if (flags.seed) cfg.base_seed = *flags.seed;
    cfg.noise_est = flags.noise_est == "misfit" ? ssrc::NoiseEstimation::Misfit
                                                : ssrc::NoiseEstimation::Ratio;
    return cfg;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Unsupervised signal-noise separation with an echo state network"};
    app.require_subcommand(1);

    CommonFlags gen_flags, bench_flags, sweep_flags, sep_flags;

    auto* gen = app.add_subcommand("generate", "write labeled noisy series + manifest");
    add_common(gen, gen_flags, true);

    auto* bench = app.add_subcommand("bench", "run the method/baseline comparison matrix");
    add_common(bench, bench_flags, true);

    auto* sweep = app.add_subcommand("sweep", "reservoir size vs noise level error grids");
    add_common(sweep, sweep_flags, true);

    auto* sep = app.add_subcommand("separate", "separate one CSV series");
    std::string input_path;
    bool tune = false;
    int budget = 40;
    std::string strategy = "bayes";
    std::string params_json;
    std::string model_out;
    sep->add_option("input", input_path, "input series CSV (header i,x[,q,xi])")->required();
    sep->add_flag("--tune", tune, "search hyperparameters before separating");
    sep->add_option("--budget", budget, "tuning trial budget");
    sep->add_option("--strategy", strategy, "tuning strategy")
        ->check(CLI::IsMember({"bayes", "random"}));
    sep->add_option("--params", params_json, "EsnParams overrides as JSON file");
    sep->add_option("--model-out", model_out, "dump the trained separator as JSON");
    add_common(sep, sep_flags, false);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        const auto cfg = load_with_overrides(gen_flags);
        ssrc::run_generate(cfg, gen_flags.out_dir);
        std::printf("wrote %d series per column under %s\n", cfg.realizations,
                    gen_flags.out_dir.c_str());
        return 0;
    }

    if (bench->parsed()) {
        const auto cfg = load_with_overrides(bench_flags);
        const ssrc::BenchResult result = ssrc::run_bench(cfg, bench_flags.jobs);
        ssrc::write_bench(result, cfg, bench_flags.out_dir);
        std::printf("bench finished: %zu trial records, %.1f%% failures, table under %s\n",
                    result.trials.size(), 100.0 * result.failure_fraction,
                    bench_flags.out_dir.c_str());
        if (result.failure_fraction > 0.10) return kExitBenchFailures;
        return 0;
    }

    if (sweep->parsed()) {
        const auto cfg = load_with_overrides(sweep_flags);
        const ssrc::SweepSpec spec = ssrc::sweep_spec_from_config(cfg);
        const ssrc::SweepResult result = ssrc::capacity_sweep(spec, sweep_flags.jobs);
        ssrc::write_sweep(result, cfg, sweep_flags.out_dir);
        std::printf("sweep finished: %zu x %zu grid under %s\n", result.levels.size(),
                    result.sizes.size(), sweep_flags.out_dir.c_str());
        return 0;
    }

    // separate
    const ssrc::LabeledSeries input = ssrc::read_csv(input_path);
    ssrc::SeparateOptions options;
    options.tune = tune;
    options.tuner.budget = budget;
    options.tuner.strategy = strategy == "random" ? ssrc::SearchStrategy::RandomSearch
                                                  : ssrc::SearchStrategy::BayesOpt;
    options.noise_est = sep_flags.noise_est == "misfit" ? ssrc::NoiseEstimation::Misfit
                                                        : ssrc::NoiseEstimation::Ratio;
    options.seed = sep_flags.seed.value_or(1);
    options.jobs = sep_flags.jobs;
    if (!sep_flags.config_path.empty()) {
        const auto cfg = ssrc::load_config(sep_flags.config_path);
        options.tuner = cfg.tuner;
        options.tuner.budget = budget;
        options.params = cfg.tuner.space.base;
        options.noise_est = cfg.noise_est;
        if (!sep_flags.seed) options.seed = cfg.base_seed;
    }
    if (!params_json.empty()) {
        std::ifstream in(params_json);
        if (!in) throw ssrc::ParseError("cannot open params file '" + params_json + "'");
        nlohmann::json pj;
        try {
            in >> pj;
        } catch (const nlohmann::json::exception& e) {
            throw ssrc::ParseError(std::string("bad params JSON: ") + e.what());
        }
        ssrc::EsnParams p = options.params;
        p.reservoir_size = pj.value("reservoir_size", p.reservoir_size);
        p.spectral_radius = pj.value("spectral_radius", p.spectral_radius);
        p.leak = pj.value("leak", p.leak);
        p.input_scale = pj.value("input_scale", p.input_scale);
        p.connectivity = pj.value("connectivity", p.connectivity);
        p.ridge = pj.value("ridge", p.ridge);
        p.washout = pj.value("washout", p.washout);
        p.seed = pj.value("seed", p.seed);
        options.params = p;
    }
    if (!model_out.empty()) options.model_out = model_out;

    const ssrc::SeparateOutput output = ssrc::run_separate(input, options);
    ssrc::write_separate(output, input, options, sep_flags.out_dir);
    std::printf("noise kind: %s (statistic %.3f), validation error %.6g; results under %s\n",
                ssrc::to_string(output.result.noise_kind), output.result.kind_statistic,
                output.result.validation_error, sep_flags.out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ssrc::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParse;
    } catch (const ssrc::DegenerateInputError& e) {
        std::fprintf(stderr, "degenerate input: %s\n", e.what());
        return kExitDegenerate;
    } catch (const ssrc::OptimizationError& e) {
        std::fprintf(stderr, "optimization failed: %s\n", e.what());
        for (const auto& cause : e.causes) std::fprintf(stderr, "  trial: %s\n", cause.c_str());
        return kExitOptimization;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
