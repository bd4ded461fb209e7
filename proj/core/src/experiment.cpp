#include "ssrc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ssrc/csv.hpp"
#include "ssrc/errors.hpp"
#include "ssrc/metrics.hpp"
#include "ssrc/model_io.hpp"
#include "ssrc/parallel.hpp"
#include "ssrc/rng.hpp"

namespace ssrc {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config serialization
// ---------------------------------------------------------------------------

namespace {

json signal_to_json(const SignalSpec& s) {
    json j{{"family", to_string(s.family)}};
    switch (s.family) {
        case SignalFamily::Lorenz:
            j["sigma"] = s.lorenz.sigma;
            j["rho"] = s.lorenz.rho;
            j["beta"] = s.lorenz.beta;
            j["dt"] = s.lorenz.dt;
            j["initial_state"] = s.lorenz.initial_state;
            j["observe"] = s.lorenz.observe;
            j["transient_skip"] = s.lorenz.transient_skip;
            break;
        case SignalFamily::HighFreqSin:
            j["amplitude"] = s.sin_amplitude;
            j["period"] = s.sin_period;
            j["phase"] = s.sin_phase;
            break;
        case SignalFamily::MLogistic:
            j["r"] = s.mlog_r;
            j["memory"] = s.mlog_memory;
            j["q0"] = s.mlog_q0;
            j["q1"] = s.mlog_q1;
            break;
    }
    return j;
}

SignalSpec signal_from_json(const json& j) {
    SignalSpec s;
    const std::string family = j.at("family").get<std::string>();
    if (family == "lorenz") {
        s.family = SignalFamily::Lorenz;
        s.lorenz.sigma = j.value("sigma", s.lorenz.sigma);
        s.lorenz.rho = j.value("rho", s.lorenz.rho);
        s.lorenz.beta = j.value("beta", s.lorenz.beta);
        s.lorenz.dt = j.value("dt", s.lorenz.dt);
        if (j.contains("initial_state")) s.lorenz.initial_state = j.at("initial_state");
        s.lorenz.observe = j.value("observe", s.lorenz.observe);
        s.lorenz.transient_skip = j.value("transient_skip", s.lorenz.transient_skip);
    } else if (family == "highfreq") {
        s.family = SignalFamily::HighFreqSin;
        s.sin_amplitude = j.value("amplitude", s.sin_amplitude);
        s.sin_period = j.value("period", s.sin_period);
        s.sin_phase = j.value("phase", s.sin_phase);
    } else if (family == "mlogistic") {
        s.family = SignalFamily::MLogistic;
        s.mlog_r = j.value("r", s.mlog_r);
        s.mlog_memory = j.value("memory", s.mlog_memory);
        s.mlog_q0 = j.value("q0", s.mlog_q0);
        s.mlog_q1 = j.value("q1", s.mlog_q1);
    } else {
        throw ParseError("unknown signal family '" + family + "'");
    }
    return s;
}

json noise_to_json(const NoiseSpec& n) {
    return {{"family", to_string(n.family)}, {"sigma_ln", n.sigma_ln},
            {"mode_offset", n.mode_offset},  {"mode_std", n.mode_std},
            {"gamma_shape", n.gamma_shape},  {"snr_db", n.target_snr_db}};
}

NoiseSpec noise_from_json(const json& j) {
    NoiseSpec n;
    const std::string family = j.at("family").get<std::string>();
    if (family == "lognormal")
        n.family = NoiseFamily::Lognormal;
    else if (family == "bimodal")
        n.family = NoiseFamily::BimodalGaussian;
    else if (family == "gamma")
        n.family = NoiseFamily::Gamma;
    else
        throw ParseError("unknown noise family '" + family + "'");
    n.sigma_ln = j.value("sigma_ln", n.sigma_ln);
    n.mode_offset = j.value("mode_offset", n.mode_offset);
    n.mode_std = j.value("mode_std", n.mode_std);
    n.gamma_shape = j.value("gamma_shape", n.gamma_shape);
    n.target_snr_db = j.value("snr_db", n.target_snr_db);
    return n;
}

FilterSpec filter_from_name(const std::string& name) {
    FilterSpec f;
    if (name == "wavelet_soft") {
        f.kind = FilterSpec::Kind::Wavelet;
        f.variant = WaveletVariant::Soft;
    } else if (name == "wavelet_hard") {
        f.kind = FilterSpec::Kind::Wavelet;
        f.variant = WaveletVariant::Hard;
    } else if (name.rfind("lowpass", 0) == 0) {
        f.kind = FilterSpec::Kind::LowPass;
        f.fraction = std::stoi(name.substr(7)) / 100.0;
    } else if (name == "median") {
        f.kind = FilterSpec::Kind::Median;
    } else if (name == "adaptive") {
        f.kind = FilterSpec::Kind::Adaptive;
    } else if (name == "identity") {
        f.kind = FilterSpec::Kind::Identity;
    } else {
        throw ParseError("unknown baseline '" + name + "'");
    }
    return f;
}

json esn_params_to_json(const EsnParams& p) {
    return {{"reservoir_size", p.reservoir_size},
            {"spectral_radius", p.spectral_radius},
            {"leak", p.leak},
            {"input_scale", p.input_scale},
            {"connectivity", p.connectivity},
            {"ridge", p.ridge},
            {"washout", p.washout},
            {"seed", p.seed}};
}

EsnParams esn_params_from_json(const json& j, EsnParams base = {}) {
    base.reservoir_size = j.value("reservoir_size", base.reservoir_size);
    base.spectral_radius = j.value("spectral_radius", base.spectral_radius);
    base.leak = j.value("leak", base.leak);
    base.input_scale = j.value("input_scale", base.input_scale);
    base.connectivity = j.value("connectivity", base.connectivity);
    base.ridge = j.value("ridge", base.ridge);
    base.washout = j.value("washout", base.washout);
    base.seed = j.value("seed", base.seed);
    return base;
}

json range_to_json(std::pair<double, double> r) { return json::array({r.first, r.second}); }

}  // namespace

std::vector<FilterSpec> default_baselines() {
    std::vector<FilterSpec> out;
    FilterSpec f;
    f.kind = FilterSpec::Kind::Wavelet;
    f.variant = WaveletVariant::Soft;
    out.push_back(f);
    f.variant = WaveletVariant::Hard;
    out.push_back(f);
    f = FilterSpec{};
    f.kind = FilterSpec::Kind::LowPass;
    for (double frac : {0.25, 0.50, 0.75}) {
        f.fraction = frac;
        out.push_back(f);
    }
    f = FilterSpec{};
    f.kind = FilterSpec::Kind::Median;
    out.push_back(f);
    f = FilterSpec{};
    f.kind = FilterSpec::Kind::Adaptive;
    out.push_back(f);
    return out;
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }

    try {
        ExperimentConfig cfg;
        if (j.contains("columns"))
            for (const auto& c : j.at("columns"))
                cfg.columns.push_back(
                    {signal_from_json(c.at("signal")), c.at("snr_db").get<double>()});
        else if (j.contains("signal"))
            cfg.columns.push_back({signal_from_json(j.at("signal")),
                                   j.contains("noise") ? j.at("noise").value("snr_db", 0.0) : 0.0});

        if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
        cfg.length = j.value("length", cfg.length);
        cfg.validation_len = j.value("validation", cfg.validation_len);
        cfg.realizations = j.value("realizations", cfg.realizations);
        cfg.base_seed = j.value("base_seed", cfg.base_seed);
        if (j.contains("noise_est")) {
            const std::string est = j.at("noise_est").get<std::string>();
            if (est == "ratio")
                cfg.noise_est = NoiseEstimation::Ratio;
            else if (est == "misfit")
                cfg.noise_est = NoiseEstimation::Misfit;
            else
                throw ParseError("noise_est must be 'ratio' or 'misfit'");
        }

        if (j.contains("tuner")) {
            const auto& t = j.at("tuner");
            const std::string strategy = t.value("strategy", std::string("bayes"));
            if (strategy == "bayes")
                cfg.tuner.strategy = SearchStrategy::BayesOpt;
            else if (strategy == "random")
                cfg.tuner.strategy = SearchStrategy::RandomSearch;
            else
                throw ParseError("tuner.strategy must be 'bayes' or 'random'");
            cfg.tuner.budget = t.value("budget", cfg.tuner.budget);
            if (t.contains("space")) {
                const auto& s = t.at("space");
                auto& sp = cfg.tuner.space;
                const auto read_range = [&](const char* key, auto& range) {
                    if (s.contains(key)) {
                        range.first = s.at(key).at(0);
                        range.second = s.at(key).at(1);
                    }
                };
                read_range("reservoir_size", sp.reservoir_size);
                read_range("spectral_radius", sp.spectral_radius);
                read_range("leak", sp.leak);
                read_range("ridge", sp.ridge);
                read_range("input_scale", sp.input_scale);
                if (s.contains("base")) sp.base = esn_params_from_json(s.at("base"), sp.base);
            }
        }

        if (j.contains("baselines"))
            for (const auto& b : j.at("baselines"))
                cfg.baselines.push_back(filter_from_name(b.get<std::string>()));
        else
            cfg.baselines = default_baselines();

        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.contains("levels")) cfg.sweep_levels = s.at("levels").get<std::vector<double>>();
            if (s.contains("sizes")) cfg.sweep_sizes = s.at("sizes").get<std::vector<int>>();
            cfg.sweep_trials = s.value("trials", cfg.sweep_trials);
        }

        if (cfg.realizations < 1) throw ParseError("realizations must be >= 1");
        if (cfg.columns.empty()) throw ParseError("config needs a 'signal' or 'columns' entry");
        if (cfg.validation_len + 1 >= cfg.length)
            throw ParseError("validation length leaves no training data");
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config schema error: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["columns"] = json::array();
    for (const auto& c : cfg.columns)
        j["columns"].push_back({{"signal", signal_to_json(c.signal)}, {"snr_db", c.snr_db}});
    j["noise"] = noise_to_json(cfg.noise);
    j["length"] = cfg.length;
    j["validation"] = cfg.validation_len;
    j["realizations"] = cfg.realizations;
    j["base_seed"] = cfg.base_seed;
    j["noise_est"] = cfg.noise_est == NoiseEstimation::Ratio ? "ratio" : "misfit";
    j["tuner"] = {
        {"strategy", cfg.tuner.strategy == SearchStrategy::BayesOpt ? "bayes" : "random"},
        {"budget", cfg.tuner.budget},
        {"space",
         {{"reservoir_size",
           json::array({cfg.tuner.space.reservoir_size.first, cfg.tuner.space.reservoir_size.second})},
          {"spectral_radius", range_to_json(cfg.tuner.space.spectral_radius)},
          {"leak", range_to_json(cfg.tuner.space.leak)},
          {"ridge", range_to_json(cfg.tuner.space.ridge)},
          {"input_scale", range_to_json(cfg.tuner.space.input_scale)},
          {"base", esn_params_to_json(cfg.tuner.space.base)}}}};
    j["baselines"] = json::array();
    for (const auto& b : cfg.baselines) j["baselines"].push_back(b.label());
    j["sweep"] = {{"levels", cfg.sweep_levels},
                  {"sizes", cfg.sweep_sizes},
                  {"trials", cfg.sweep_trials}};
    return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = config_to_json(config);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t trial_seed(const ExperimentConfig& config, std::size_t column, int trial) {
    return config.base_seed + column * static_cast<std::size_t>(config.realizations) +
           static_cast<std::size_t>(trial);
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

std::vector<GeneratedFile> run_generate(const ExperimentConfig& config,
                                        const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string hash = config_hash(config);

    std::vector<GeneratedFile> files;
    for (std::size_t c = 0; c < config.columns.size(); ++c) {
        const auto& column = config.columns[c];
        const TimeSeries q = standardize(gen_signal(column.signal, config.length)).first;
        NoiseSpec noise = config.noise;
        noise.target_snr_db = column.snr_db;
        for (int t = 0; t < config.realizations; ++t) {
            const std::uint64_t seed = trial_seed(config, c, t);
            const LabeledSeries mixed = mix(q, noise, seed);
            TimeSeries noise_component = *mixed.truth_noise;
            if (mixed.noise_kind_truth == NoiseKind::Multiplicative)
                for (std::size_t i = 0; i < noise_component.size(); ++i)
                    noise_component.values[i] = mixed.observed[i] - q[i];
            const double measured = snr_db(q, noise_component);

            char name[64];
            std::snprintf(name, sizeof name, "c%zu_%s_r%04d.csv", c,
                          to_string(column.signal.family), t);
            write_csv(mixed, out_dir / name,
                      {"ssrc config_hash=" + hash + " base_seed=" + std::to_string(config.base_seed),
                       "column=" + std::to_string(c) + " trial=" + std::to_string(t) +
                           " seed=" + std::to_string(seed)});
            files.push_back({name, c, t, seed, measured});
        }
    }

    json manifest;
    manifest["config"] = json::parse(config_to_json(config));
    manifest["config_hash"] = hash;
    manifest["base_seed"] = config.base_seed;
    manifest["files"] = json::array();
    for (const auto& f : files)
        manifest["files"].push_back({{"file", f.filename},
                                     {"column", f.column},
                                     {"trial", f.trial},
                                     {"seed", f.seed},
                                     {"measured_snr_db", f.measured_snr_db}});
    std::ofstream out(out_dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest.json");
    out << manifest.dump(2) << '\n';
    return files;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

namespace {

// Truth-referenced metrics for one separation, computed on the original scale.
BenchTrialRecord make_record(const LabeledSeries& mixed, const TimeSeries& q,
                             const SeparationResult& sep, const StandardizationParams& std_params,
                             const Split& split, NoiseEstimation convention) {
    BenchTrialRecord rec;
    rec.ok = true;
    rec.rmse_validation = sep.validation_error;
    rec.kind_estimated = sep.noise_kind;

    const TimeSeries q_hat = destandardize(sep.q_hat, std_params);
    const std::size_t v0 = split.train_end + 1;
    const std::size_t vn = split.total_end - split.train_end;
    rec.rmse_truth = rmse({q_hat.values.data() + v0, vn}, {q.values.data() + v0, vn});

    const NoiseKind kind_truth = *mixed.noise_kind_truth;
    const NoiseKind kind_mapped = sep.noise_kind == NoiseKind::Multiplicative
                                      ? NoiseKind::Multiplicative
                                      : NoiseKind::Additive;
    rec.id_correct = kind_mapped == kind_truth;

    // Noise distribution recovery, with estimate and truth on the same scale.
    const IndexRange est_range{sep.psi_start, split.train_end};
    const auto [xi_est, xi_idx] =
        estimate_noise(mixed.observed, q_hat, kind_mapped, est_range, convention);
    std::vector<double> xi_true;
    xi_true.reserve(est_range.count());
    const bool shifted = kind_mapped == NoiseKind::Multiplicative &&
                         kind_truth == NoiseKind::Multiplicative &&
                         convention == NoiseEstimation::Misfit;
    for (std::size_t i = est_range.first; i <= est_range.last; ++i)
        xi_true.push_back((*mixed.truth_noise)[i] - (shifted ? 1.0 : 0.0));
    const auto [h_est, h_true] = shared_histograms(xi_est, xi_true, 50);
    rec.jsd_noise = jsd(h_est, h_true);
    rec.xi_histogram_bimodal = histogram_bimodal(xi_est);
    return rec;
}

}  // namespace

BenchResult run_bench(const ExperimentConfig& config, int jobs) {
    if (config.columns.empty()) throw ContractError("run_bench: no columns configured");
    const std::size_t n_columns = config.columns.size();
    const auto n_trials = static_cast<std::size_t>(config.realizations);

    // Column signals (standardized once; noise varies per realization).
    std::vector<TimeSeries> signals;
    std::vector<NoiseSpec> noises;
    for (const auto& column : config.columns) {
        signals.push_back(standardize(gen_signal(column.signal, config.length)).first);
        NoiseSpec n = config.noise;
        n.target_snr_db = column.snr_db;
        noises.push_back(n);
    }
    Split split{};
    split = split_series(signals.front(), config.validation_len);

    // Tune once per column on realization 0.
    BenchResult result;
    result.tuned_params.resize(n_columns);
    for (std::size_t c = 0; c < n_columns; ++c) {
        const LabeledSeries mixed = mix(signals[c], noises[c], trial_seed(config, c, 0));
        const TimeSeries x_std = standardize(mixed.observed).first;
        const OptimizeResult tuned =
            optimize(x_std, split, config.tuner.space, config.tuner.budget, config.tuner.strategy,
                     derive_seed(config.base_seed, 0x70e0ULL + c), jobs);
        result.tuned_params[c] = tuned.best;
    }

    // One task per (column, realization); each evaluates every method.
    const std::size_t methods = 1 + config.baselines.size();
    std::vector<BenchTrialRecord> records(n_columns * n_trials * methods);
    parallel_for(n_columns * n_trials, jobs, [&](std::size_t task) {
        const std::size_t c = task / n_trials;
        const int t = static_cast<int>(task % n_trials);
        BenchTrialRecord* slot = records.data() + task * methods;

        LabeledSeries mixed;
        TimeSeries x_std;
        StandardizationParams std_params;
        try {
            mixed = mix(signals[c], noises[c], trial_seed(config, c, t));
            std::tie(x_std, std_params) = standardize(mixed.observed);
        } catch (const std::exception& e) {
            for (std::size_t m = 0; m < methods; ++m) {
                slot[m].column = c;
                slot[m].trial = t;
                slot[m].method = m == 0 ? "ssrc" : config.baselines[m - 1].label();
                slot[m].error = e.what();
            }
            return;
        }

        const auto evaluate = [&](std::size_t m, const std::string& method, auto&& separate) {
            slot[m].column = c;
            slot[m].trial = t;
            slot[m].method = method;
            try {
                const SeparationResult sep = separate();
                slot[m] = make_record(mixed, signals[c], sep, std_params, split, config.noise_est);
                slot[m].column = c;
                slot[m].trial = t;
                slot[m].method = method;
            } catch (const std::exception& e) {
                slot[m].ok = false;
                slot[m].error = e.what();
            }
        };

        evaluate(0, "ssrc", [&] {
            return ssrc_separate(x_std, result.tuned_params[c], split, config.noise_est);
        });
        for (std::size_t b = 0; b < config.baselines.size(); ++b)
            evaluate(b + 1, config.baselines[b].label(), [&] {
                return run_baseline(x_std, config.baselines[b], split,
                                    result.tuned_params[c].washout, config.noise_est);
            });
    });
    result.trials = std::move(records);

    // Aggregate per (method, column), in a deterministic order.
    std::size_t failures = 0;
    std::map<std::pair<std::string, std::size_t>, BenchCellSummary> cells;
    for (const auto& rec : result.trials) {
        if (!rec.ok) ++failures;
        auto& cell = cells[{rec.method, rec.column}];
        cell.method = rec.method;
        cell.column = rec.column;
        if (!rec.ok) continue;
        cell.mean_rmse_truth += rec.rmse_truth;
        cell.mean_jsd += rec.jsd_noise;
        cell.id_accuracy += rec.id_correct ? 1.0 : 0.0;
        cell.bimodal_fraction += rec.xi_histogram_bimodal ? 1.0 : 0.0;
        cell.n += 1;
    }
    for (auto& [key, cell] : cells) {
        if (cell.n > 0) {
            cell.mean_rmse_truth /= cell.n;
            cell.mean_jsd /= cell.n;
            cell.id_accuracy /= cell.n;
            cell.bimodal_fraction /= cell.n;
        }
        result.table.push_back(cell);
    }
    result.failure_fraction =
        static_cast<double>(failures) / static_cast<double>(result.trials.size());
    return result;
}

void write_bench(const BenchResult& result, const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string hash = config_hash(config);
    const std::string stamp =
        "ssrc config_hash=" + hash + " base_seed=" + std::to_string(config.base_seed);

    {
        std::ofstream out(out_dir / "bench_trials.csv");
        if (!out) throw IoError("cannot write bench_trials.csv");
        out << "# " << stamp << "\n";
        out << "column,signal,trial,method,ok,rmse_truth,rmse_validation,jsd,kind,id_correct,"
               "bimodal,error\n";
        for (const auto& r : result.trials) {
            out << r.column << ',' << to_string(config.columns[r.column].signal.family) << ','
                << r.trial << ',' << r.method << ',' << (r.ok ? 1 : 0) << ','
                << format_double(r.rmse_truth) << ',' << format_double(r.rmse_validation) << ','
                << format_double(r.jsd_noise) << ',' << to_string(r.kind_estimated) << ','
                << (r.id_correct ? 1 : 0) << ',' << (r.xi_histogram_bimodal ? 1 : 0) << ','
                << r.error << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "bench_table.csv");
        if (!out) throw IoError("cannot write bench_table.csv");
        out << "# " << stamp << "\n";
        out << "method,signal,snr_db,mean_rmse,mean_jsd,id_accuracy,bimodal_fraction,n\n";
        for (const auto& cell : result.table) {
            out << cell.method << ',' << to_string(config.columns[cell.column].signal.family) << ','
                << format_double(config.columns[cell.column].snr_db) << ','
                << format_double(cell.mean_rmse_truth) << ',' << format_double(cell.mean_jsd) << ','
                << format_double(cell.id_accuracy) << ',' << format_double(cell.bimodal_fraction)
                << ',' << cell.n << '\n';
        }
    }
    {
        json manifest;
        manifest["config"] = json::parse(config_to_json(config));
        manifest["config_hash"] = hash;
        manifest["base_seed"] = config.base_seed;
        manifest["failure_fraction"] = result.failure_fraction;
        manifest["tuned_params"] = json::array();
        for (const auto& p : result.tuned_params) manifest["tuned_params"].push_back(esn_params_to_json(p));
        std::ofstream out(out_dir / "manifest.json");
        if (!out) throw IoError("cannot write manifest.json");
        out << manifest.dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

SweepSpec sweep_spec_from_config(const ExperimentConfig& config) {
    if (config.columns.empty()) throw ContractError("sweep: no signal configured");
    SweepSpec spec;
    spec.signal = config.columns.front().signal;
    spec.noise = config.noise;
    spec.levels = config.sweep_levels;
    spec.sizes = config.sweep_sizes;
    spec.trials_per_cell = config.sweep_trials;
    spec.base = config.tuner.space.base;
    spec.length = config.length;
    spec.validation_len = config.validation_len;
    spec.seed = config.base_seed;
    return spec;
}

void write_sweep(const SweepResult& result, const ExperimentConfig& config,
                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string stamp = "ssrc config_hash=" + config_hash(config) +
                              " base_seed=" + std::to_string(config.base_seed);
    {
        std::ofstream out(out_dir / "sweep_grid.csv");
        if (!out) throw IoError("cannot write sweep_grid.csv");
        out << "# " << stamp << "\n";
        out << "noise_level,reservoir_size,mean_truth_error,mean_validation_error,"
               "truth_error_normalized,validation_error_normalized\n";
        for (std::size_t li = 0; li < result.levels.size(); ++li)
            for (std::size_t si = 0; si < result.sizes.size(); ++si)
                out << format_double(result.levels[li]) << ',' << result.sizes[si] << ','
                    << format_double(result.truth_error[li][si]) << ','
                    << format_double(result.validation_error[li][si]) << ','
                    << format_double(result.truth_error_normalized[li][si]) << ','
                    << format_double(result.validation_error_normalized[li][si]) << '\n';
    }
    {
        std::ofstream out(out_dir / "sweep_argmin.csv");
        if (!out) throw IoError("cannot write sweep_argmin.csv");
        out << "# " << stamp << "\n";
        out << "noise_level,best_size_by_truth,best_size_by_validation\n";
        for (std::size_t li = 0; li < result.levels.size(); ++li)
            out << format_double(result.levels[li]) << ',' << result.best_size_by_truth[li] << ','
                << result.best_size_by_validation[li] << '\n';
    }
}

// ---------------------------------------------------------------------------
// separate
// ---------------------------------------------------------------------------

SeparateOutput run_separate(const LabeledSeries& input, const SeparateOptions& options) {
    SeparateOutput out;
    const auto [x_std, std_params] = standardize(input.observed);
    out.standardization = std_params;
    const std::size_t validation_len =
        std::max<std::size_t>(2, std::min<std::size_t>(1000, input.observed.size() / 9));
    const Split split = split_series(input.observed, validation_len);

    EsnParams params = options.params;
    if (options.tune) {
        const OptimizeResult tuned =
            optimize(x_std, split, options.tuner.space, options.tuner.budget,
                     options.tuner.strategy, options.seed, options.jobs);
        params = tuned.best;
    } else if (params.seed == 0) {
        params.seed = options.seed;
    }
    out.result = ssrc_separate(x_std, params, split, options.noise_est);

    if (options.model_out) {
        if (options.model_out->has_parent_path())
            std::filesystem::create_directories(options.model_out->parent_path());
        const Reservoir reservoir = build_reservoir(params);
        const StateTrajectory trajectory = run_states(reservoir, params, x_std);
        const auto washout = static_cast<std::size_t>(params.washout);
        const std::span<const double> targets(x_std.values.data() + washout + 1,
                                              split.train_end - washout);
        const Readout readout =
            train_readout(trajectory.states.middleCols(static_cast<Eigen::Index>(washout),
                                                       static_cast<Eigen::Index>(split.train_end - washout)),
                          targets, params.ridge);
        save_esn_json({params, reservoir, readout}, *options.model_out);
    }

    if (input.truth_signal) {
        const TimeSeries q_hat = destandardize(out.result.q_hat, std_params);
        const std::size_t v0 = split.train_end + 1;
        const std::size_t vn = split.total_end - split.train_end;
        out.rmse_truth =
            rmse({q_hat.values.data() + v0, vn}, {input.truth_signal->values.data() + v0, vn});
        if (input.truth_noise) {
            const NoiseKind kind_mapped = out.result.noise_kind == NoiseKind::Multiplicative
                                              ? NoiseKind::Multiplicative
                                              : NoiseKind::Additive;
            const IndexRange est_range{out.result.psi_start, split.train_end};
            const auto [xi_est, xi_idx] = estimate_noise(input.observed, q_hat, kind_mapped,
                                                         est_range, options.noise_est);
            std::vector<double> xi_true;
            for (std::size_t i = est_range.first; i <= est_range.last; ++i)
                xi_true.push_back((*input.truth_noise)[i]);
            const auto [h_est, h_true] = shared_histograms(xi_est, xi_true, 50);
            out.jsd_noise = jsd(h_est, h_true);
        }
    }
    return out;
}

namespace {

std::string options_hash(const SeparateOptions& options) {
    json j{{"tune", options.tune},
           {"budget", options.tuner.budget},
           {"strategy", options.tuner.strategy == SearchStrategy::BayesOpt ? "bayes" : "random"},
           {"params", esn_params_to_json(options.params)},
           {"noise_est", options.noise_est == NoiseEstimation::Ratio ? "ratio" : "misfit"},
           {"seed", options.seed}};
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

void write_separate(const SeparateOutput& output, const LabeledSeries& input,
                    const SeparateOptions& options, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const SeparationResult& r = output.result;
    const std::string stamp =
        "ssrc config_hash=" + options_hash(options) + " base_seed=" + std::to_string(options.seed);

    json j;
    j["schema_version"] = 1;
    j["config_hash"] = options_hash(options);
    j["seed"] = options.seed;
    j["standardization"] = {{"mean", output.standardization.mean},
                            {"std", output.standardization.std_dev}};
    j["params"] = esn_params_to_json(r.params_used);
    j["noise_kind"] = to_string(r.noise_kind);
    j["kind_statistic"] = r.kind_statistic;
    j["validation_error"] = r.validation_error;
    j["psi_start"] = r.psi_start;
    if (output.rmse_truth) j["rmse_truth"] = *output.rmse_truth;
    if (output.jsd_noise) j["jsd"] = *output.jsd_noise;
    j["q_hat"] = r.q_hat.values;
    j["psi"] = r.psi;
    j["xi_hat"] = r.xi_hat;
    j["xi_index"] = r.xi_index;
    {
        std::ofstream out(out_dir / "result.json");
        if (!out) throw IoError("cannot write result.json");
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "reconstruction.csv");
        if (!out) throw IoError("cannot write reconstruction.csv");
        out << "# " << stamp << "\n";
        out << "i,x,q_hat\n";
        const TimeSeries q_hat = destandardize(r.q_hat, output.standardization);
        for (std::size_t i = 0; i < input.observed.size(); ++i)
            out << i << ',' << format_double(input.observed[i]) << ','
                << format_double(q_hat[i]) << '\n';
    }
    {
        std::ofstream out(out_dir / "noise.csv");
        if (!out) throw IoError("cannot write noise.csv");
        out << "# " << stamp << "\n";
        out << "i,xi_hat\n";
        for (std::size_t k = 0; k < r.xi_hat.size(); ++k)
            out << r.xi_index[k] << ',' << format_double(r.xi_hat[k]) << '\n';
    }
}

}  // namespace ssrc
