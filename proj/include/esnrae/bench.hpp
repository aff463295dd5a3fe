#pragma once

// Experiment orchestration: encode → classify over methods × noise levels ×
// runs, aggregation, the P1/P2/P3 ratio table, and report emission.

#include "esnrae/classify.hpp"
#include "esnrae/dataio.hpp"
#include "esnrae/rae.hpp"
#include "esnrae/reservoir.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace esnrae {

/// A pipeline variant: the raw baseline classifies the original patterns,
/// the others classify the states of the corresponding autoencoder.
enum class Method { raw, esn_rae, ml_esn_rae, elm_ae, ml_elm_ae };

[[nodiscard]] std::string_view method_name(Method m) noexcept;
[[nodiscard]] std::optional<Method> parse_method(std::string_view name) noexcept;
[[nodiscard]] std::optional<AutoencoderKind> method_kind(Method m) noexcept;

inline constexpr double kClean = std::numeric_limits<double>::infinity();

[[nodiscard]] inline bool is_clean(double snr_db) noexcept { return snr_db >= kNoiseFreeSnrDb; }

struct ExperimentSpec {
    std::string dataset = "dataset";
    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::vector<Method> methods{Method::esn_rae, Method::ml_esn_rae};
    bool raw_baseline = false;  // adds Method::raw when absent from `methods`
    ReservoirConfig cfg;        // input_dim is taken from the data
    std::size_t n_runs = 10;
    std::uint64_t base_seed = 1;
    std::vector<double> noise_levels{kClean};  // dB; kClean = noise free
    NoiseTargets noise_targets = NoiseTargets::both;
    std::size_t n_candidates = 10;
    ResetPolicy reset_policy = ResetPolicy::carry;
    std::optional<double> pinv_tolerance;
    ClassifierParams classifier;
    bool normalize = true;
    /// Multiplies the (normalized) patterns before encoding; nullopt means
    /// 1/sqrt(K), which gives z-scored patterns roughly unit Euclidean norm.
    std::optional<double> input_gain;
    bool record_timing = true;
    std::size_t workers = 0;  // 0 = hardware concurrency

    /// Methods in execution order, raw first when requested.
    [[nodiscard]] std::vector<Method> effective_methods() const;
    /// @throws ParameterError
    void validate() const;
};

struct CellResult {
    Method method = Method::raw;
    double snr_db = kClean;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool valid = false;
    std::string error;  // why an invalid cell failed
    double er = 0.0;
    std::optional<double> recon_error;  // absent for the raw baseline
    double fit_ms = 0.0;
    double encode_ms = 0.0;
    double classify_ms = 0.0;
    // Test-feature statistics (not part of the csv schema).
    double near_zero_fraction = 0.0;  // |x| < 0.05
    double max_abs_feature = 0.0;
};

struct CellSummary {
    Method method = Method::raw;
    double snr_db = kClean;
    std::size_t valid_runs = 0;
    std::size_t invalid_runs = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double min = std::numeric_limits<double>::quiet_NaN();
    double max = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::string isa;
    /// Ordered by (method, noise level, run) as listed in the spec.
    std::vector<CellResult> cells;
    double load_ms = 0.0;

    [[nodiscard]] bool all_valid() const noexcept;
    [[nodiscard]] std::vector<double> run_errors(Method m, double snr_db) const;
    [[nodiscard]] CellSummary summary(Method m, double snr_db) const;
    /// Mean ER over valid runs; nullopt when the cell has none.
    [[nodiscard]] std::optional<double> mean_er(Method m, double snr_db) const;
};

/// Runs every (method, noise level, run) cell on a bounded worker pool. Cell
/// results are stored by key, so the report does not depend on completion
/// order. A cell that throws is recorded as invalid with its message.
[[nodiscard]] ExperimentReport run_experiment(const ExperimentSpec& spec);
[[nodiscard]] ExperimentReport run_experiment(const ExperimentSpec& spec, const Dataset& train,
                                              const Dataset& test);

/// Input gain applied to patterns of length k.
[[nodiscard]] double resolved_input_gain(const ExperimentSpec& spec, std::size_t k);

/// Optional z-scoring with train statistics, then the input gain.
[[nodiscard]] std::pair<Dataset, Dataset> preprocess(const ExperimentSpec& spec, const Dataset& train,
                                                     const Dataset& test);

/// One cell of the pipeline, exposed for tests and the CLI.
[[nodiscard]] CellResult run_cell(const ExperimentSpec& spec, const Dataset& train,
                                  const Dataset& test, Method method, double snr_db,
                                  std::size_t run);

/// P1 = ER(ml-esn-rae)/ER(esn-rae), P2 = ER(ml-esn-rae)/ER(ml-elm-ae),
/// P3 = ER(esn-rae)/ER(elm-ae), each × 100. A zero denominator leaves the
/// ratio undefined (nullopt).
struct RatioRow {
    double snr_db = kClean;
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<double> p3;
};

[[nodiscard]] std::optional<double> percent_ratio(double numerator, double denominator) noexcept;
[[nodiscard]] RatioRow ratios_from_errors(double er_esn_rae, double er_ml_esn_rae, double er_elm_ae,
                                          double er_ml_elm_ae, double snr_db = kClean) noexcept;
/// @throws ParameterError naming the first method missing from the report.
[[nodiscard]] std::vector<RatioRow> ratio_table(const ExperimentReport& report);

enum class ReportFormat { csv, markdown };

[[nodiscard]] std::string report_csv(const ExperimentReport& report);
[[nodiscard]] std::string report_markdown(const ExperimentReport& report);
/// @throws IoError when the path cannot be written.
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Per-run rows recovered from emitted csv (comment lines skipped).
struct CsvRow {
    std::string dataset;
    std::string method;
    double snr_db = kClean;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    std::optional<double> er;  // nullopt for invalid cells
    std::optional<double> recon_error;
};
[[nodiscard]] std::vector<CsvRow> parse_report_csv(const std::string& text);

/// Human label for a noise level: "noise free" or "SNR=10dB".
[[nodiscard]] std::string noise_label(double snr_db);

/// key=value lines describing the resolved spec (used by both emitters and
/// the CLI's configuration echo).
[[nodiscard]] std::vector<std::pair<std::string, std::string>> describe_spec(const ExperimentSpec& spec);

}  // namespace esnrae
