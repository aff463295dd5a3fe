#include "esnrae/cli.hpp"

#include "esnrae/bench.hpp"
#include "esnrae/classify.hpp"
#include "esnrae/dataio.hpp"
#include "esnrae/error.hpp"
#include "esnrae/presets.hpp"
#include "esnrae/rae.hpp"
#include "format_util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace esnrae {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Every ExperimentSpec field, each optional so that a config file and the
// command line can be layered (flags win).
struct Settings {
    std::optional<std::string> preset;
    std::optional<std::string> dataset;
    std::optional<std::string> train;
    std::optional<std::string> test;
    std::optional<std::string> ucr_dir;
    std::optional<std::vector<std::string>> methods;
    std::optional<std::string> kind;
    std::optional<bool> raw_baseline;
    std::optional<std::size_t> n_hidden;
    std::optional<double> connectivity;
    std::optional<double> spectral_radius;
    std::optional<std::size_t> n_layers;
    std::optional<double> input_scaling;
    std::optional<double> bias_scale;
    std::optional<double> inter_scaling;
    std::optional<double> decoder_bias_scale;
    std::optional<double> weight_low;
    std::optional<double> weight_high;
    std::optional<std::size_t> n_runs;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> noise_levels;
    std::optional<std::string> noise_targets;
    std::optional<std::size_t> n_candidates;
    std::optional<std::string> reset_policy;
    std::optional<double> pinv_tolerance;
    std::optional<double> classifier_lambda;
    std::optional<std::size_t> classifier_epochs;
    std::optional<std::uint64_t> classifier_seed;
    std::optional<bool> normalize;
    std::optional<double> input_gain;
    std::optional<bool> record_timing;
    std::optional<std::size_t> workers;
    std::optional<bool> synthetic;
    std::optional<std::size_t> synth_length;
    std::optional<std::size_t> synth_train_size;
    std::optional<std::size_t> synth_test_size;
    std::optional<double> synth_noise_level;
    std::optional<std::uint64_t> synth_seed;
};

template <class T>
void overlay(std::optional<T>& base, const std::optional<T>& top) {
    if (top) base = top;
}

Settings merge(Settings base, const Settings& top) {
    overlay(base.preset, top.preset);
    overlay(base.dataset, top.dataset);
    overlay(base.train, top.train);
    overlay(base.test, top.test);
    overlay(base.ucr_dir, top.ucr_dir);
    overlay(base.methods, top.methods);
    overlay(base.kind, top.kind);
    overlay(base.raw_baseline, top.raw_baseline);
    overlay(base.n_hidden, top.n_hidden);
    overlay(base.connectivity, top.connectivity);
    overlay(base.spectral_radius, top.spectral_radius);
    overlay(base.n_layers, top.n_layers);
    overlay(base.input_scaling, top.input_scaling);
    overlay(base.bias_scale, top.bias_scale);
    overlay(base.inter_scaling, top.inter_scaling);
    overlay(base.decoder_bias_scale, top.decoder_bias_scale);
    overlay(base.weight_low, top.weight_low);
    overlay(base.weight_high, top.weight_high);
    overlay(base.n_runs, top.n_runs);
    overlay(base.seed, top.seed);
    overlay(base.noise_levels, top.noise_levels);
    overlay(base.noise_targets, top.noise_targets);
    overlay(base.n_candidates, top.n_candidates);
    overlay(base.reset_policy, top.reset_policy);
    overlay(base.pinv_tolerance, top.pinv_tolerance);
    overlay(base.classifier_lambda, top.classifier_lambda);
    overlay(base.classifier_epochs, top.classifier_epochs);
    overlay(base.classifier_seed, top.classifier_seed);
    overlay(base.normalize, top.normalize);
    overlay(base.input_gain, top.input_gain);
    overlay(base.record_timing, top.record_timing);
    overlay(base.workers, top.workers);
    overlay(base.synthetic, top.synthetic);
    overlay(base.synth_length, top.synth_length);
    overlay(base.synth_train_size, top.synth_train_size);
    overlay(base.synth_test_size, top.synth_test_size);
    overlay(base.synth_noise_level, top.synth_noise_level);
    overlay(base.synth_seed, top.synth_seed);
    return base;
}

std::vector<std::string> string_list(const json& v, const std::string& key) {
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw FormatError("config key '" + key + "' must be a string or a list");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (e.is_string()) {
            out.push_back(e.get<std::string>());
        } else if (e.is_number()) {
            out.push_back(detail::format_double(e.get<double>()));
        } else {
            throw FormatError("config key '" + key + "' holds a non-scalar entry");
        }
    }
    return out;
}

Settings load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("config file '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) throw FormatError("config file '" + path.string() + "' must hold an object");

    Settings s;
    for (const auto& [key, v] : doc.items()) {
        auto get = [&](auto& slot) {
            using T = typename std::remove_reference_t<decltype(slot)>::value_type;
            try {
                slot = v.get<T>();
            } catch (const json::exception&) {
                throw FormatError("config key '" + key + "' has the wrong type");
            }
        };
        if (key == "preset") get(s.preset);
        else if (key == "dataset") get(s.dataset);
        else if (key == "train") get(s.train);
        else if (key == "test") get(s.test);
        else if (key == "ucr_dir") get(s.ucr_dir);
        else if (key == "methods") s.methods = string_list(v, key);
        else if (key == "kind") get(s.kind);
        else if (key == "raw_baseline") get(s.raw_baseline);
        else if (key == "n_hidden") get(s.n_hidden);
        else if (key == "connectivity") get(s.connectivity);
        else if (key == "spectral_radius") get(s.spectral_radius);
        else if (key == "n_layers") get(s.n_layers);
        else if (key == "input_scaling") get(s.input_scaling);
        else if (key == "bias_scale") get(s.bias_scale);
        else if (key == "inter_scaling") get(s.inter_scaling);
        else if (key == "decoder_bias_scale") get(s.decoder_bias_scale);
        else if (key == "weight_low") get(s.weight_low);
        else if (key == "weight_high") get(s.weight_high);
        else if (key == "n_runs") get(s.n_runs);
        else if (key == "base_seed" || key == "seed") get(s.seed);
        else if (key == "noise_levels") s.noise_levels = string_list(v, key);
        else if (key == "noise_targets") get(s.noise_targets);
        else if (key == "n_candidates") get(s.n_candidates);
        else if (key == "reset_policy") get(s.reset_policy);
        else if (key == "pinv_tolerance") get(s.pinv_tolerance);
        else if (key == "classifier_lambda") get(s.classifier_lambda);
        else if (key == "classifier_epochs") get(s.classifier_epochs);
        else if (key == "classifier_seed") get(s.classifier_seed);
        else if (key == "normalize") get(s.normalize);
        else if (key == "input_gain") get(s.input_gain);
        else if (key == "record_timing") get(s.record_timing);
        else if (key == "workers") get(s.workers);
        else if (key == "synthetic") get(s.synthetic);
        else if (key == "synth_length") get(s.synth_length);
        else if (key == "synth_train_size") get(s.synth_train_size);
        else if (key == "synth_test_size") get(s.synth_test_size);
        else if (key == "synth_noise_level") get(s.synth_noise_level);
        else if (key == "synth_seed") get(s.synth_seed);
        else throw FormatError("config file '" + path.string() + "': unknown key '" + key + "'");
    }
    return s;
}

// "ECG200_TRAIN.txt" -> "ECG200"
std::string dataset_stem(const std::string& path) {
    std::string stem = fs::path(path).stem().string();
    for (const char* suffix : {"_TRAIN", "_TEST"}) {
        const std::string sfx = suffix;
        if (stem.size() > sfx.size() && stem.compare(stem.size() - sfx.size(), sfx.size(), sfx) == 0) {
            return stem.substr(0, stem.size() - sfx.size());
        }
    }
    return stem;
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) {
        const auto m = parse_method(n);
        if (!m) {
            throw ParameterError("unknown method '" + n +
                                 "' (expected raw, esn-rae, ml-esn-rae, elm-ae or ml-elm-ae)");
        }
        out.push_back(*m);
    }
    return out;
}

double parse_noise_level(const std::string& s) {
    if (s == "clean" || s == "inf" || s == "none") return kClean;
    try {
        return detail::parse_double(s, "noise level");
    } catch (const FormatError&) {
        throw ParameterError("bad noise level '" + s + "' (expected dB value or 'clean')");
    }
}

struct Resolved {
    ExperimentSpec spec;
    std::optional<SynthSpec> synth;
    std::optional<std::string> preset_key;
};

Resolved resolve(const Settings& s, bool need_data) {
    Resolved r;
    ExperimentSpec& spec = r.spec;

    const bool synthetic = s.synthetic.value_or(false);
    std::optional<DatasetPreset> preset;
    if (s.preset) {
        preset = find_preset(*s.preset);
        if (!preset) throw ParameterError("unknown preset '" + *s.preset + "'");
    } else if (s.dataset) {
        preset = find_preset(*s.dataset);
    } else if (s.train) {
        preset = find_preset(dataset_stem(*s.train));
    }
    if (preset) r.preset_key = std::string(preset->key);

    if (preset) {
        spec.cfg = preset_config(*preset);
        spec.cfg.input_dim = 0;
    } else {
        if (!s.n_hidden || !s.connectivity) {
            throw ParameterError("no preset matches this dataset; pass --preset or both --n-hidden and "
                                 "--connectivity");
        }
        spec.cfg.n_layers = kPresetLayers;
    }
    if (s.n_hidden) spec.cfg.n_hidden = *s.n_hidden;
    if (s.connectivity) spec.cfg.connectivity = *s.connectivity;
    if (s.spectral_radius) spec.cfg.spectral_radius_target = *s.spectral_radius;
    if (s.n_layers) spec.cfg.n_layers = *s.n_layers;
    if (s.input_scaling) spec.cfg.input_scaling = *s.input_scaling;
    if (s.bias_scale) spec.cfg.bias_scale = *s.bias_scale;
    if (s.inter_scaling) spec.cfg.inter_scaling = *s.inter_scaling;
    if (s.decoder_bias_scale) spec.cfg.decoder_bias_scale = *s.decoder_bias_scale;
    if (s.weight_low) spec.cfg.weight_low = *s.weight_low;
    if (s.weight_high) spec.cfg.weight_high = *s.weight_high;

    if (s.dataset) spec.dataset = *s.dataset;
    else if (preset) spec.dataset = std::string(preset->archive);
    else if (synthetic) spec.dataset = "synthetic";
    else if (s.train) spec.dataset = dataset_stem(*s.train);

    if (synthetic) {
        SynthSpec syn;
        if (s.synth_length) syn.length = *s.synth_length;
        if (s.synth_train_size) syn.train_size = *s.synth_train_size;
        if (s.synth_test_size) syn.test_size = *s.synth_test_size;
        if (s.synth_noise_level) syn.noise_level = *s.synth_noise_level;
        if (s.synth_seed) syn.seed = *s.synth_seed;
        r.synth = syn;
    } else {
        if (s.train) spec.train_path = *s.train;
        if (s.test) spec.test_path = *s.test;
        if ((spec.train_path.empty() || spec.test_path.empty()) && s.ucr_dir && preset) {
            if (const auto files = find_ucr_files(*s.ucr_dir, preset->archive)) {
                if (spec.train_path.empty()) spec.train_path = files->first;
                if (spec.test_path.empty()) spec.test_path = files->second;
            } else {
                throw FormatError("no " + std::string(preset->archive) + "_TRAIN/_TEST files under '" +
                                  *s.ucr_dir + "/" + std::string(preset->archive) + "'");
            }
        }
        if (need_data && (spec.train_path.empty() || spec.test_path.empty())) {
            throw ParameterError("train and test files are required (--train/--test or --ucr-dir with a "
                                 "preset)");
        }
    }

    if (s.methods) spec.methods = resolve_methods(*s.methods);
    if (s.raw_baseline) spec.raw_baseline = *s.raw_baseline;
    if (s.n_runs) spec.n_runs = *s.n_runs;
    if (s.seed) spec.base_seed = *s.seed;
    if (s.noise_levels) {
        spec.noise_levels.clear();
        for (const auto& l : *s.noise_levels) spec.noise_levels.push_back(parse_noise_level(l));
    }
    if (s.noise_targets) {
        if (*s.noise_targets == "train") spec.noise_targets = NoiseTargets::train;
        else if (*s.noise_targets == "test") spec.noise_targets = NoiseTargets::test;
        else if (*s.noise_targets == "both") spec.noise_targets = NoiseTargets::both;
        else throw ParameterError("noise_targets must be train, test or both");
    }
    if (s.n_candidates) spec.n_candidates = *s.n_candidates;
    if (s.reset_policy) {
        if (*s.reset_policy == "carry") spec.reset_policy = ResetPolicy::carry;
        else if (*s.reset_policy == "reset") spec.reset_policy = ResetPolicy::reset;
        else throw ParameterError("reset_policy must be carry or reset");
    }
    if (s.pinv_tolerance) spec.pinv_tolerance = *s.pinv_tolerance;
    if (s.classifier_lambda) spec.classifier.lambda = *s.classifier_lambda;
    if (s.classifier_epochs) spec.classifier.epochs = *s.classifier_epochs;
    if (s.classifier_seed) spec.classifier.seed = *s.classifier_seed;
    if (s.normalize) spec.normalize = *s.normalize;
    if (s.input_gain) spec.input_gain = *s.input_gain;
    if (s.record_timing) spec.record_timing = *s.record_timing;
    if (s.workers) spec.workers = *s.workers;
    return r;
}

std::pair<Dataset, Dataset> load_data(const Resolved& r) {
    if (r.synth) return make_synthetic(*r.synth);
    Dataset train = parse_ucr(r.spec.train_path, Split::train);
    Dataset test = parse_ucr(r.spec.test_path, Split::test, &train.label_map);
    return {std::move(train), std::move(test)};
}

void echo(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) out << "# " << k << '=' << v << '\n';
    out.flush();
}

std::vector<std::pair<std::string, std::string>> describe_resolved(const Resolved& r) {
    auto kv = describe_spec(r.spec);
    kv.emplace_back("preset", r.preset_key.value_or("none"));
    if (r.synth) {
        kv.emplace_back("synthetic", "length=" + std::to_string(r.synth->length) +
                                         " train=" + std::to_string(r.synth->train_size) +
                                         " test=" + std::to_string(r.synth->test_size) +
                                         " noise=" + detail::format_double(r.synth->noise_level) +
                                         " seed=" + std::to_string(r.synth->seed));
    }
    return kv;
}

Dataset feature_dataset(const Matrix& features, const Dataset& source, Split split) {
    Dataset d;
    d.name = source.name;
    d.patterns = features.transpose();
    d.labels = source.labels;
    d.label_map = source.label_map;
    d.split = split;
    return d;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void add_model_options(CLI::App& app, Settings& s) {
    app.add_option("--config", "JSON config file with ExperimentSpec fields (flags take precedence)");
    app.add_option("--preset", s.preset, "Built-in dataset preset (ecg200, coffee, meat, ...)");
    app.add_option("--dataset", s.dataset, "Dataset name used in reports");
    app.add_option("--train", s.train, "Training file in UCR format");
    app.add_option("--test", s.test, "Testing file in UCR format");
    app.add_option("--ucr-dir", s.ucr_dir, "UCR archive root; with a preset, locates the train/test files");
    app.add_option("--n-hidden", s.n_hidden, "Reservoir size N");
    app.add_option("--connectivity", s.connectivity, "Fraction of nonzero recurrent weights");
    app.add_option("--spectral-radius", s.spectral_radius, "Target spectral radius (default 0.9)");
    app.add_option("--layers", s.n_layers, "Reservoir count for multi-layer kinds (default 2)");
    app.add_option("--input-scaling", s.input_scaling, "Scale of the random input weights");
    app.add_option("--bias-scale", s.bias_scale, "Encoder bias range [-s, s]");
    app.add_option("--inter-scaling", s.inter_scaling, "Multiplier on the inter-layer weights");
    app.add_option("--decoder-bias-scale", s.decoder_bias_scale, "Decoder bias range [-s, s]");
    app.add_option("--weight-low", s.weight_low, "Lower bound of random weights");
    app.add_option("--weight-high", s.weight_high, "Upper bound of random weights");
    app.add_option("--candidates", s.n_candidates, "Random encoders tried before tying (default 10)");
    app.add_option("--seed", s.seed, "Base seed (run r uses seed + r)");
    app.add_option("--reset-policy", s.reset_policy, "carry (default) or reset state between patterns");
    app.add_option("--pinv-tol", s.pinv_tolerance, "Singular-value cutoff for the pseudo-inverse");
    app.add_flag("--no-normalize{false}", s.normalize, "Skip z-score normalization");
    app.add_option("--input-gain", s.input_gain, "Pattern multiplier after normalization (default 1/sqrt(K))");
    app.add_option("--synth-length", s.synth_length, "Synthetic dataset pattern length");
    app.add_flag("--synthetic", s.synthetic, "Use the built-in sine vs noisy-sine dataset");
}

void add_classifier_options(CLI::App& app, Settings& s) {
    app.add_option("--lambda", s.classifier_lambda, "Classifier L2 strength (default 1e-4)");
    app.add_option("--epochs", s.classifier_epochs, "Classifier epochs (default 50)");
    app.add_option("--classifier-seed", s.classifier_seed, "Classifier shuffling seed (default 0)");
}

Settings layered(const CLI::App& app, const Settings& flags) {
    Settings base;
    if (const auto* opt = app.get_option_no_throw("--config"); opt && opt->count() > 0) {
        base = load_config(opt->as<std::string>());
    }
    return merge(base, flags);
}

int cmd_encode(const CLI::App& app, const Settings& flags, const std::string& kind_name_arg,
               const std::string& out_dir, std::ostream& out) {
    Settings s = layered(app, flags);
    if (!kind_name_arg.empty()) s.kind = kind_name_arg;
    const std::string kname = s.kind.value_or("esn-rae");
    const auto kind = parse_kind(kname);
    if (!kind) throw ParameterError("unknown autoencoder kind '" + kname + "'");
    Resolved r = resolve(s, true);
    auto kv = describe_resolved(r);
    kv.emplace_back("kind", kname);
    kv.emplace_back("out", out_dir);
    echo(out, kv);

    auto [raw_train, raw_test] = load_data(r);
    auto [train, test] = preprocess(r.spec, raw_train, raw_test);
    RaeTrainSpec rs;
    rs.cfg = r.spec.cfg;
    rs.cfg.input_dim = train.length();
    rs.n_candidates = r.spec.n_candidates;
    rs.seed = r.spec.base_seed;
    rs.reset_policy = r.spec.reset_policy;
    rs.pinv_tolerance = r.spec.pinv_tolerance;
    const TrainedAutoencoder t = fit(train, rs, *kind);
    const Matrix f_test = encode(t, test);

    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    {
        std::ofstream f(dir / "encoder.rae", std::ios::binary);
        if (!f) throw IoError("cannot write '" + (dir / "encoder.rae").string() + "'");
        save_autoencoder(t, f);
    }
    write_ucr(feature_dataset(t.features_train, train, Split::train), dir / "features_train.txt");
    write_ucr(feature_dataset(f_test, test, Split::test), dir / "features_test.txt");

    out << "chosen_candidate=" << t.chosen_candidate << '\n'
        << "pre_tying_error=" << detail::format_double(t.pre_tying_error) << '\n'
        << "reconstruction_error=" << detail::format_double(t.reconstruction_error) << '\n'
        << "features_train=" << t.features_train.rows() << 'x' << t.features_train.cols() << '\n'
        << "features_test=" << f_test.rows() << 'x' << f_test.cols() << '\n';
    return kExitOk;
}

int cmd_classify(const Settings& flags, const std::string& train_path, const std::string& test_path,
                 const std::string& out_dir, std::ostream& out) {
    ClassifierParams params;
    if (flags.classifier_lambda) params.lambda = *flags.classifier_lambda;
    if (flags.classifier_epochs) params.epochs = *flags.classifier_epochs;
    if (flags.classifier_seed) params.seed = *flags.classifier_seed;
    echo(out, {{"train", train_path},
               {"test", test_path},
               {"classifier_lambda", detail::format_double(params.lambda)},
               {"classifier_epochs", std::to_string(params.epochs)},
               {"classifier_seed", std::to_string(params.seed)},
               {"out", out_dir}});

    const Dataset train = parse_ucr(train_path, Split::train);
    const Dataset test = parse_ucr(test_path, Split::test, &train.label_map);
    if (train.length() != test.length()) {
        throw FormatError("feature files disagree on width: " + std::to_string(train.length()) + " vs " +
                          std::to_string(test.length()));
    }
    const LinearClassifier clf = train_classifier(train.patterns.transpose(), train.labels, params);
    const EvalResult eval = evaluate(clf, test.patterns.transpose(), test.labels);

    ensure_dir(out_dir);
    const fs::path path = fs::path(out_dir) / "classifier.bin";
    {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write '" + path.string() + "'");
        save_classifier(clf, f);
    }
    out << "error_rate=" << detail::format_double(eval.error_rate) << '\n'
        << "misclassified=" << eval.misclassified << '/' << eval.total << '\n'
        << "confusion (rows = true label, columns = predicted)\n";
    for (const auto& row : eval.confusion) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
        out << '\n';
    }
    return kExitOk;
}

int cmd_bench(const CLI::App& app, const Settings& flags, const std::string& out_dir, bool verbose,
              std::ostream& out) {
    const Settings s = layered(app, flags);
    Resolved r = resolve(s, true);
    r.spec.validate();
    auto kv = describe_resolved(r);
    kv.emplace_back("out", out_dir);
    echo(out, kv);

    auto [train, test] = load_data(r);
    const ExperimentReport report = run_experiment(r.spec, train, test);
    ensure_dir(out_dir);
    emit_report(report, ReportFormat::csv, fs::path(out_dir) / "report.csv");
    emit_report(report, ReportFormat::markdown, fs::path(out_dir) / "report.md");

    if (verbose) {
        for (const auto& c : report.cells) {
            out << method_name(c.method) << ' ' << noise_label(c.snr_db) << " run " << c.run << ": "
                << (c.valid ? "er=" + detail::format_double(c.er) : "invalid (" + c.error + ")");
            if (c.valid && c.recon_error) {
                out << " recon=" << detail::format_double(*c.recon_error)
                    << " near_zero=" << detail::format_double(c.near_zero_fraction)
                    << " max_abs=" << detail::format_double(c.max_abs_feature);
            }
            out << '\n';
        }
    }
    for (Method m : r.spec.effective_methods()) {
        for (double level : r.spec.noise_levels) {
            const CellSummary cs = report.summary(m, level);
            out << method_name(m) << " [" << noise_label(level) << "] mean_er="
                << (cs.valid_runs ? detail::format_double(cs.mean) : std::string("invalid")) << " ("
                << cs.valid_runs << '/' << r.spec.n_runs << " valid)\n";
        }
    }
    out << "wrote " << (fs::path(out_dir) / "report.csv").string() << " and "
        << (fs::path(out_dir) / "report.md").string() << '\n';
    return report.all_valid() ? kExitOk : kExitPartial;
}

int cmd_noise(const std::string& input, double snr, std::uint64_t seed, const std::string& split_arg,
              const std::string& output, std::ostream& out) {
    // The split selects the noise sub-stream; "auto" reads it from the file name.
    Split split = Split::train;
    if (split_arg == "test") split = Split::test;
    else if (split_arg == "auto") split = fs::path(input).stem().string().ends_with("_TEST") ? Split::test : Split::train;
    else if (split_arg != "train") throw ParameterError("--split must be train, test or auto");
    echo(out, {{"input", input},
               {"snr_db", detail::format_double(snr)},
               {"seed", std::to_string(seed)},
               {"split", split_name(split)},
               {"output", output}});

    const Dataset clean = parse_ucr(input, split);
    const Dataset noisy = inject_noise(clean, NoiseSpec{snr, seed, NoiseTargets::both});
    write_ucr(noisy, output);
    out << "measured_snr_db=" << detail::format_double(measured_snr(clean, noisy)) << '\n';
    return kExitOk;
}

int cmd_synth(const SynthSpec& spec, const std::string& name, const std::string& out_dir,
              std::ostream& out) {
    echo(out, {{"length", std::to_string(spec.length)},
               {"train_size", std::to_string(spec.train_size)},
               {"test_size", std::to_string(spec.test_size)},
               {"noise_level", detail::format_double(spec.noise_level)},
               {"seed", std::to_string(spec.seed)},
               {"out", out_dir}});
    const auto [train, test] = make_synthetic(spec);
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_ucr(train, dir / (name + "_TRAIN.txt"));
    write_ucr(test, dir / (name + "_TEST.txt"));
    out << "wrote " << (dir / (name + "_TRAIN.txt")).string() << " and "
        << (dir / (name + "_TEST.txt")).string() << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Echo state network recurrent autoencoders for time-series classification", "esnrae"};
    app.require_subcommand(1);

    Settings enc_flags, bench_flags, cls_flags;
    std::string enc_kind, enc_out = ".";
    auto* encode_cmd = app.add_subcommand("encode", "Train an autoencoder and write encoder and features");
    add_model_options(*encode_cmd, enc_flags);
    encode_cmd->add_option("--kind", enc_kind, "esn-rae (default), ml-esn-rae, elm-ae or ml-elm-ae");
    encode_cmd->add_option("--out", enc_out, "Output directory");

    std::string cls_train, cls_test, cls_out = ".";
    auto* classify_cmd = app.add_subcommand("classify", "Train the linear classifier on feature files");
    classify_cmd->add_option("--train", cls_train, "Training features (UCR format)")->required();
    classify_cmd->add_option("--test", cls_test, "Testing features (UCR format)")->required();
    classify_cmd->add_option("--out", cls_out, "Output directory");
    add_classifier_options(*classify_cmd, cls_flags);

    std::string bench_out = ".";
    bool verbose = false;
    std::vector<std::string> methods, levels;
    auto* bench_cmd = app.add_subcommand("bench", "Run the multi-run encode/classify experiment");
    add_model_options(*bench_cmd, bench_flags);
    add_classifier_options(*bench_cmd, bench_flags);
    bench_cmd->add_option("--methods", methods, "Comma list: raw, esn-rae, ml-esn-rae, elm-ae, ml-elm-ae")
        ->delimiter(',');
    bench_cmd->add_option("--noise", levels, "Comma list of SNR levels in dB, 'clean' for none")
        ->delimiter(',');
    bench_cmd->add_option("--noise-targets", bench_flags.noise_targets, "train, test or both (default)");
    bench_cmd->add_option("--runs", bench_flags.n_runs, "Runs per cell (default 10)");
    bench_cmd->add_flag("--raw-baseline", bench_flags.raw_baseline, "Also classify the raw patterns");
    bench_cmd->add_option("--workers", bench_flags.workers, "Worker threads (default: all cores)");
    bench_cmd->add_flag("--no-timing{false}", bench_flags.record_timing,
                        "Leave timing columns empty (byte-stable csv)");
    bench_cmd->add_option("--out", bench_out, "Output directory for report.csv and report.md");
    bench_cmd->add_flag("-v,--verbose", verbose, "Print every cell");

    std::string noise_in, noise_outp, noise_split = "auto";
    double noise_snr = 0.0;
    std::uint64_t noise_seed = 1;
    auto* noise_cmd = app.add_subcommand("noise", "Write a noisy copy of a UCR file");
    noise_cmd->add_option("--input", noise_in, "UCR file")->required();
    noise_cmd->add_option("--snr", noise_snr, "Signal-to-noise ratio in dB")->required();
    noise_cmd->add_option("--seed", noise_seed, "Noise seed (default 1)");
    noise_cmd->add_option("--split", noise_split, "train, test or auto (from the file name)");
    noise_cmd->add_option("--output", noise_outp, "Output UCR file")->required();

    SynthSpec synth;
    std::string synth_name = "synthetic", synth_out = ".";
    auto* synth_cmd = app.add_subcommand("synth", "Write the sine vs noisy-sine toy dataset");
    synth_cmd->add_option("--length", synth.length, "Pattern length");
    synth_cmd->add_option("--train-size", synth.train_size, "Training patterns");
    synth_cmd->add_option("--test-size", synth.test_size, "Testing patterns");
    synth_cmd->add_option("--noise-level", synth.noise_level, "Noise deviation of class 1");
    synth_cmd->add_option("--seed", synth.seed, "Generator seed");
    synth_cmd->add_option("--name", synth_name, "File stem");
    synth_cmd->add_option("--out", synth_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (!methods.empty()) bench_flags.methods = methods;
    if (!levels.empty()) bench_flags.noise_levels = levels;

    try {
        if (*encode_cmd) return cmd_encode(*encode_cmd, enc_flags, enc_kind, enc_out, out);
        if (*classify_cmd) return cmd_classify(cls_flags, cls_train, cls_test, cls_out, out);
        if (*bench_cmd) return cmd_bench(*bench_cmd, bench_flags, bench_out, verbose, out);
        if (*noise_cmd) {
            return cmd_noise(noise_in, noise_snr, noise_seed, noise_split, noise_outp, out);
        }
        if (*synth_cmd) return cmd_synth(synth, synth_name, synth_out, out);
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace esnrae
