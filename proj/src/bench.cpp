#include "esnrae/bench.hpp"

#include "esnrae/error.hpp"
#include "esnrae/kernels.hpp"
#include "format_util.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace esnrae {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string format_ms(double ms) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << ms;
    return s.str();
}

std::string format_er(double er) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << er;
    return s.str();
}

std::string format_optional_percent(const std::optional<double>& v) {
    if (!v) return "undefined";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << *v;
    return s.str();
}

std::string join_methods(const std::vector<Method>& methods) {
    std::string out;
    for (Method m : methods) {
        if (!out.empty()) out += ' ';
        out += method_name(m);
    }
    return out;
}

const char* targets_name(NoiseTargets t) {
    switch (t) {
        case NoiseTargets::train: return "train";
        case NoiseTargets::test: return "test";
        case NoiseTargets::both: return "both";
    }
    return "both";
}

struct FeatureStats {
    double near_zero = 0.0;
    double max_abs = 0.0;
};

FeatureStats feature_stats(const Matrix& f) {
    FeatureStats s;
    if (f.size() == 0) return s;
    std::size_t small = 0;
    for (double v : f.data()) {
        const double a = std::abs(v);
        if (a < 0.05) ++small;
        s.max_abs = std::max(s.max_abs, a);
    }
    s.near_zero = static_cast<double>(small) / static_cast<double>(f.size());
    return s;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
    switch (m) {
        case Method::raw: return "raw";
        case Method::esn_rae: return "esn-rae";
        case Method::ml_esn_rae: return "ml-esn-rae";
        case Method::elm_ae: return "elm-ae";
        case Method::ml_elm_ae: return "ml-elm-ae";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : {Method::raw, Method::esn_rae, Method::ml_esn_rae, Method::elm_ae, Method::ml_elm_ae}) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

std::optional<AutoencoderKind> method_kind(Method m) noexcept {
    switch (m) {
        case Method::raw: return std::nullopt;
        case Method::esn_rae: return AutoencoderKind::esn_rae;
        case Method::ml_esn_rae: return AutoencoderKind::ml_esn_rae;
        case Method::elm_ae: return AutoencoderKind::elm_ae;
        case Method::ml_elm_ae: return AutoencoderKind::ml_elm_ae;
    }
    return std::nullopt;
}

std::vector<Method> ExperimentSpec::effective_methods() const {
    std::vector<Method> out;
    if (raw_baseline || std::find(methods.begin(), methods.end(), Method::raw) != methods.end()) {
        out.push_back(Method::raw);
    }
    for (Method m : methods) {
        if (m != Method::raw && std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    return out;
}

void ExperimentSpec::validate() const {
    if (n_runs == 0) throw ParameterError("n_runs must be at least 1");
    if (effective_methods().empty()) throw ParameterError("no methods selected");
    if (noise_levels.empty()) throw ParameterError("at least one noise level is required");
    for (std::size_t i = 0; i < noise_levels.size(); ++i) {
        if (std::isnan(noise_levels[i])) throw ParameterError("noise level is NaN");
        for (std::size_t j = 0; j < i; ++j) {
            if (noise_levels[j] == noise_levels[i] ||
                (is_clean(noise_levels[j]) && is_clean(noise_levels[i]))) {
                throw ParameterError("noise levels must be distinct");
            }
        }
    }
    if (n_candidates == 0) throw ParameterError("n_candidates must be at least 1");
    if (input_gain && !(*input_gain > 0.0 && std::isfinite(*input_gain))) {
        throw ParameterError("input_gain must be positive and finite");
    }
    if (!(classifier.lambda > 0.0) || classifier.epochs == 0) {
        throw ParameterError("classifier needs lambda > 0 and at least one epoch");
    }
    ReservoirConfig probe = cfg;
    if (probe.input_dim == 0) probe.input_dim = 1;
    probe.validate();
    for (Method m : effective_methods()) {
        const auto kind = method_kind(m);
        if (kind && is_multilayer(*kind) && cfg.n_layers < 2) {
            throw ParameterError(std::string(method_name(m)) + " needs n_layers >= 2");
        }
    }
}

bool ExperimentReport::all_valid() const noexcept {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.valid; });
}

std::vector<double> ExperimentReport::run_errors(Method m, double snr_db) const {
    std::vector<double> out;
    for (const auto& c : cells) {
        if (c.method == m && c.snr_db == snr_db && c.valid) out.push_back(c.er);
    }
    return out;
}

CellSummary ExperimentReport::summary(Method m, double snr_db) const {
    CellSummary s;
    s.method = m;
    s.snr_db = snr_db;
    for (const auto& c : cells) {
        if (c.method == m && c.snr_db == snr_db && !c.valid) ++s.invalid_runs;
    }
    const auto errors = run_errors(m, snr_db);
    s.valid_runs = errors.size();
    if (errors.empty()) return s;
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean = sum / static_cast<double>(errors.size());
    s.min = *std::min_element(errors.begin(), errors.end());
    s.max = *std::max_element(errors.begin(), errors.end());
    double var = 0.0;
    for (double e : errors) var += (e - s.mean) * (e - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(errors.size()));
    return s;
}

std::optional<double> ExperimentReport::mean_er(Method m, double snr_db) const {
    const CellSummary s = summary(m, snr_db);
    if (s.valid_runs == 0) return std::nullopt;
    return s.mean;
}

double resolved_input_gain(const ExperimentSpec& spec, std::size_t k) {
    if (spec.input_gain) return *spec.input_gain;
    return k == 0 ? 1.0 : 1.0 / std::sqrt(static_cast<double>(k));
}

std::pair<Dataset, Dataset> preprocess(const ExperimentSpec& spec, const Dataset& train,
                                       const Dataset& test) {
    Dataset tr = spec.normalize ? normalize(train, train) : train;
    Dataset te = spec.normalize ? normalize(test, train) : test;
    const double gain = resolved_input_gain(spec, train.length());
    if (gain != 1.0) {
        tr = scale_patterns(tr, gain);
        te = scale_patterns(te, gain);
    }
    return {std::move(tr), std::move(te)};
}

CellResult run_cell(const ExperimentSpec& spec, const Dataset& train, const Dataset& test,
                    Method method, double snr_db, std::size_t run) {
    CellResult r;
    r.method = method;
    r.snr_db = snr_db;
    r.run = run;
    r.seed = spec.base_seed + run;

    Dataset tr = train;
    Dataset te = test;
    if (!is_clean(snr_db)) {
        const NoiseSpec noise{snr_db, r.seed, spec.noise_targets};
        if (noise.applies_to(Split::train)) tr = inject_noise(tr, noise);
        if (noise.applies_to(Split::test)) te = inject_noise(te, noise);
    }
    std::tie(tr, te) = preprocess(spec, tr, te);

    Matrix f_train, f_test;
    if (const auto kind = method_kind(method)) {
        RaeTrainSpec rs;
        rs.cfg = spec.cfg;
        rs.cfg.input_dim = tr.length();
        rs.n_candidates = spec.n_candidates;
        rs.seed = r.seed;
        rs.reset_policy = spec.reset_policy;
        rs.pinv_tolerance = spec.pinv_tolerance;
        auto start = Clock::now();
        TrainedAutoencoder t = fit(tr, rs, *kind);
        r.fit_ms = elapsed_ms(start);
        r.recon_error = t.reconstruction_error;
        start = Clock::now();
        f_test = encode(t, te);
        r.encode_ms = elapsed_ms(start);
        f_train = std::move(t.features_train);
    } else {
        const auto start = Clock::now();
        f_train = tr.patterns.transpose();
        f_test = te.patterns.transpose();
        r.encode_ms = elapsed_ms(start);
    }

    const auto start = Clock::now();
    const LinearClassifier clf = train_classifier(f_train, tr.labels, spec.classifier);
    const EvalResult eval = evaluate(clf, f_test, te.labels);
    r.classify_ms = elapsed_ms(start);
    r.er = eval.error_rate;

    const FeatureStats stats = feature_stats(f_test);
    r.near_zero_fraction = stats.near_zero;
    r.max_abs_feature = stats.max_abs;
    if (!spec.record_timing) r.fit_ms = r.encode_ms = r.classify_ms = 0.0;
    r.valid = true;
    return r;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const Dataset& train, const Dataset& test) {
    spec.validate();
    if (train.length() != test.length()) {
        throw ShapeError("train patterns have length " + std::to_string(train.length()) +
                         " but test patterns have length " + std::to_string(test.length()));
    }
    ExperimentReport report;
    report.spec = spec;
    report.isa = std::string(kernels::isa_name(kernels::active().isa));

    const auto methods = spec.effective_methods();
    for (Method m : methods) {
        for (double level : spec.noise_levels) {
            for (std::size_t run = 0; run < spec.n_runs; ++run) {
                CellResult c;
                c.method = m;
                c.snr_db = level;
                c.run = run;
                c.seed = spec.base_seed + run;
                report.cells.push_back(c);
            }
        }
    }

    std::size_t workers = spec.workers != 0 ? spec.workers : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, report.cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) {
            CellResult& slot = report.cells[i];
            try {
                slot = run_cell(spec, train, test, slot.method, slot.snr_db, slot.run);
            } catch (const std::exception& e) {
                slot.valid = false;
                slot.error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    const auto start = Clock::now();
    Dataset train = parse_ucr(spec.train_path, Split::train);
    Dataset test = parse_ucr(spec.test_path, Split::test, &train.label_map);
    const double load_ms = elapsed_ms(start);
    ExperimentReport report = run_experiment(spec, train, test);
    report.load_ms = spec.record_timing ? load_ms : 0.0;
    return report;
}

std::optional<double> percent_ratio(double numerator, double denominator) noexcept {
    if (denominator == 0.0 || !std::isfinite(numerator) || !std::isfinite(denominator)) {
        return std::nullopt;
    }
    return 100.0 * numerator / denominator;
}

RatioRow ratios_from_errors(double er_esn_rae, double er_ml_esn_rae, double er_elm_ae,
                            double er_ml_elm_ae, double snr_db) noexcept {
    RatioRow row;
    row.snr_db = snr_db;
    row.p1 = percent_ratio(er_ml_esn_rae, er_esn_rae);
    row.p2 = percent_ratio(er_ml_esn_rae, er_ml_elm_ae);
    row.p3 = percent_ratio(er_esn_rae, er_elm_ae);
    return row;
}

std::vector<RatioRow> ratio_table(const ExperimentReport& report) {
    const auto methods = report.spec.effective_methods();
    for (Method m : {Method::esn_rae, Method::ml_esn_rae, Method::elm_ae, Method::ml_elm_ae}) {
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) {
            throw ParameterError("ratio table needs method '" + std::string(method_name(m)) +
                                 "', which the report does not contain");
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<RatioRow> rows;
    for (double level : report.spec.noise_levels) {
        rows.push_back(ratios_from_errors(report.mean_er(Method::esn_rae, level).value_or(nan),
                                          report.mean_er(Method::ml_esn_rae, level).value_or(nan),
                                          report.mean_er(Method::elm_ae, level).value_or(nan),
                                          report.mean_er(Method::ml_elm_ae, level).value_or(nan),
                                          level));
    }
    return rows;
}

std::string noise_label(double snr_db) {
    if (is_clean(snr_db)) return "noise free";
    return "SNR=" + detail::format_double(snr_db) + "dB";
}

std::vector<std::pair<std::string, std::string>> describe_spec(const ExperimentSpec& spec) {
    using detail::format_double;
    std::vector<std::pair<std::string, std::string>> kv;
    const auto& cfg = spec.cfg;
    kv.emplace_back("dataset", spec.dataset);
    kv.emplace_back("train", spec.train_path.string());
    kv.emplace_back("test", spec.test_path.string());
    kv.emplace_back("methods", join_methods(spec.effective_methods()));
    kv.emplace_back("n_hidden", std::to_string(cfg.n_hidden));
    kv.emplace_back("connectivity", format_double(cfg.connectivity));
    kv.emplace_back("spectral_radius", format_double(cfg.spectral_radius_target));
    kv.emplace_back("n_layers", std::to_string(cfg.n_layers));
    kv.emplace_back("input_scaling", format_double(cfg.input_scaling));
    kv.emplace_back("bias_scale", format_double(cfg.bias_scale));
    kv.emplace_back("inter_scaling", cfg.inter_scaling ? format_double(*cfg.inter_scaling)
                                                       : "sqrt(3/N) = " + format_double(cfg.resolved_inter_scaling()));
    kv.emplace_back("decoder_bias_scale", format_double(cfg.decoder_bias_scale));
    kv.emplace_back("weight_range", "[" + format_double(cfg.weight_low) + ", " +
                                        format_double(cfg.weight_high) + "]");
    kv.emplace_back("n_runs", std::to_string(spec.n_runs));
    kv.emplace_back("base_seed", std::to_string(spec.base_seed));
    std::string seeds;
    for (std::size_t r = 0; r < spec.n_runs; ++r) {
        if (!seeds.empty()) seeds += ' ';
        seeds += std::to_string(spec.base_seed + r);
    }
    kv.emplace_back("seeds", seeds);
    std::string levels;
    for (double l : spec.noise_levels) {
        if (!levels.empty()) levels += ' ';
        levels += is_clean(l) ? std::string("clean") : format_double(l);
    }
    kv.emplace_back("noise_levels", levels);
    kv.emplace_back("noise_targets", targets_name(spec.noise_targets));
    kv.emplace_back("n_candidates", std::to_string(spec.n_candidates));
    kv.emplace_back("reset_policy", spec.reset_policy == ResetPolicy::carry ? "carry" : "reset");
    kv.emplace_back("pinv_tolerance",
                    spec.pinv_tolerance ? format_double(*spec.pinv_tolerance) : std::string("default"));
    kv.emplace_back("classifier_lambda", format_double(spec.classifier.lambda));
    kv.emplace_back("classifier_epochs", std::to_string(spec.classifier.epochs));
    kv.emplace_back("classifier_seed", std::to_string(spec.classifier.seed));
    kv.emplace_back("normalize", spec.normalize ? "true" : "false");
    kv.emplace_back("input_gain",
                    spec.input_gain ? format_double(*spec.input_gain) : std::string("1/sqrt(K)"));
    kv.emplace_back("record_timing", spec.record_timing ? "true" : "false");
    return kv;
}

std::string report_csv(const ExperimentReport& report) {
    using detail::format_double;
    std::ostringstream out;
    for (const auto& [key, value] : describe_spec(report.spec)) out << "# " << key << '=' << value << '\n';
    out << "dataset,method,snr_db,run,seed,er,recon_error,fit_ms,encode_ms,classify_ms\n";
    for (const auto& c : report.cells) {
        out << report.spec.dataset << ',' << method_name(c.method) << ','
            << (is_clean(c.snr_db) ? std::string() : format_double(c.snr_db)) << ',' << c.run << ','
            << c.seed << ',' << (c.valid ? format_double(c.er) : std::string("invalid")) << ','
            << (c.valid && c.recon_error ? format_double(*c.recon_error) : std::string()) << ',';
        if (report.spec.record_timing && c.valid) {
            out << format_ms(c.fit_ms) << ',' << format_ms(c.encode_ms) << ',' << format_ms(c.classify_ms);
        } else {
            out << ",,";
        }
        out << '\n';
    }
    return out.str();
}

std::vector<CsvRow> parse_report_csv(const std::string& text) {
    using detail::parse_double;
    using detail::parse_unsigned;
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line.rfind("dataset,method,", 0) != 0) throw FormatError("report csv: missing header");
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 10) throw FormatError("report csv: expected 10 columns in '" + line + "'");
        CsvRow r;
        r.dataset = f[0];
        r.method = f[1];
        r.snr_db = f[2].empty() ? kClean : parse_double(f[2], "snr_db");
        r.run = parse_unsigned(f[3], "run");
        r.seed = parse_unsigned(f[4], "seed");
        if (f[5] != "invalid") r.er = parse_double(f[5], "er");
        if (!f[6].empty()) r.recon_error = parse_double(f[6], "recon_error");
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw FormatError("report csv: missing header");
    return rows;
}

std::string report_markdown(const ExperimentReport& report) {
    const auto& spec = report.spec;
    const auto methods = spec.effective_methods();
    std::ostringstream out;
    out << "# Experiment report: " << spec.dataset << "\n\n";
    out << "## Configuration\n\n| key | value |\n|---|---|\n";
    for (const auto& [key, value] : describe_spec(spec)) out << "| " << key << " | " << value << " |\n";
    out << "| kernels | " << report.isa << " |\n\n";

    for (double level : spec.noise_levels) {
        out << "## Error rate, " << noise_label(level) << "\n\n";
        out << "| Method | ER | min | max | std | runs |\n|---|---|---|---|---|---|\n";
        for (Method m : methods) {
            const CellSummary s = report.summary(m, level);
            out << "| " << method_name(m) << " | ";
            if (s.valid_runs == 0) {
                out << "invalid | | | | 0/" << spec.n_runs << " |\n";
                continue;
            }
            out << format_er(s.mean) << " | " << format_er(s.min) << " | " << format_er(s.max) << " | "
                << format_er(s.stddev) << " | " << s.valid_runs << '/' << spec.n_runs << " |\n";
        }
        out << '\n';
    }

    if (spec.noise_levels.size() > 1) {
        out << "## Error rate by noise level\n\n| Noise level |";
        for (Method m : methods) out << ' ' << method_name(m) << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
        out << '\n';
        for (double level : spec.noise_levels) {
            out << "| " << noise_label(level) << " |";
            for (Method m : methods) {
                const auto mean = report.mean_er(m, level);
                out << ' ' << (mean ? format_er(*mean) : std::string("invalid")) << " |";
            }
            out << '\n';
        }
        out << '\n';
    }

    bool has_all_four = true;
    for (Method m : {Method::esn_rae, Method::ml_esn_rae, Method::elm_ae, Method::ml_elm_ae}) {
        has_all_four &= std::find(methods.begin(), methods.end(), m) != methods.end();
    }
    if (has_all_four) {
        out << "## Error-rate ratios\n\n"
            << "P1 = ER(ml-esn-rae)/ER(esn-rae), P2 = ER(ml-esn-rae)/ER(ml-elm-ae), "
               "P3 = ER(esn-rae)/ER(elm-ae), in percent.\n\n"
            << "| Noise level | P1 (%) | P2 (%) | P3 (%) |\n|---|---|---|---|\n";
        for (const auto& row : ratio_table(report)) {
            out << "| " << noise_label(row.snr_db) << " | " << format_optional_percent(row.p1) << " | "
                << format_optional_percent(row.p2) << " | " << format_optional_percent(row.p3) << " |\n";
        }
        out << '\n';
    }

    if (spec.record_timing) {
        out << "## Mean wall-clock per phase (ms)\n\n| Method | fit | encode | classify |\n|---|---|---|---|\n";
        for (Method m : methods) {
            double fit = 0, enc = 0, cls = 0;
            std::size_t n = 0;
            for (const auto& c : report.cells) {
                if (c.method != m || !c.valid) continue;
                fit += c.fit_ms;
                enc += c.encode_ms;
                cls += c.classify_ms;
                ++n;
            }
            if (n == 0) continue;
            const auto k = static_cast<double>(n);
            out << "| " << method_name(m) << " | " << format_ms(fit / k) << " | " << format_ms(enc / k)
                << " | " << format_ms(cls / k) << " |\n";
        }
        out << '\n';
    }

    if (!report.all_valid()) {
        out << "## Invalid cells\n\n| Method | Noise level | run | error |\n|---|---|---|---|\n";
        for (const auto& c : report.cells) {
            if (c.valid) continue;
            out << "| " << method_name(c.method) << " | " << noise_label(c.snr_db) << " | " << c.run
                << " | " << c.error << " |\n";
        }
        out << '\n';
    }
    return out.str();
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report to '" + path.string() + "'");
    out << (format == ReportFormat::csv ? report_csv(report) : report_markdown(report));
    if (!out) throw IoError("failed writing report to '" + path.string() + "'");
}

}  // namespace esnrae
