#pragma once

#include "esnrae/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace esnrae {

enum class Split { train, test };

[[nodiscard]] const char* split_name(Split s) noexcept;

/// Labeled pattern matrix: one row per pattern, K columns.
///
/// `labels` are contiguous class ids 0..C-1; `label_map[id]` is the original
/// label found in the file.
struct Dataset {
    std::string name;
    Matrix patterns;
    std::vector<int> labels;
    std::vector<long long> label_map;
    Split split = Split::train;

    [[nodiscard]] std::size_t size() const noexcept { return patterns.rows(); }
    [[nodiscard]] std::size_t length() const noexcept { return patterns.cols(); }
    [[nodiscard]] std::size_t num_classes() const noexcept { return label_map.size(); }
};

/// Reads a UCR-format file: one pattern per line, an integer class label (it
/// may be written as a real, e.g. "1.0000000e+00") followed by K values.
/// Fields are separated by commas, tabs or runs of whitespace.
///
/// Labels are remapped to 0..C-1 in ascending order of the original value,
/// unless `label_map` is given (e.g. the train map when reading a test file),
/// in which case labels outside it are a format error.
[[nodiscard]] Dataset parse_ucr(const std::filesystem::path& path, Split split = Split::train,
                                const std::vector<long long>* label_map = nullptr);

/// Same as parse_ucr, reading from an in-memory document.
[[nodiscard]] Dataset parse_ucr_text(const std::string& text, std::string name,
                                     Split split = Split::train,
                                     const std::vector<long long>* label_map = nullptr);

/// UCR text with original labels and shortest round-trip number formatting.
[[nodiscard]] std::string serialize_ucr(const Dataset& d);
void write_ucr(const Dataset& d, const std::filesystem::path& path);

/// Per-feature z-score using the mean and population standard deviation of
/// `stats_from`. Features with zero deviation pass through untouched.
[[nodiscard]] Dataset normalize(const Dataset& d, const Dataset& stats_from);

/// Every value multiplied by `factor`.
[[nodiscard]] Dataset scale_patterns(const Dataset& d, double factor);

enum class NoiseTargets { train, test, both };

struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    NoiseTargets targets = NoiseTargets::both;

    [[nodiscard]] bool applies_to(Split s) const noexcept {
        return targets == NoiseTargets::both ||
               (targets == NoiseTargets::train) == (s == Split::train);
    }
};

/// SNR at or above this level is treated as noise free.
inline constexpr double kNoiseFreeSnrDb = 300.0;

/// Adds zero-mean Gaussian noise to every pattern. Pattern i receives variance
/// P_i / 10^(snr_db/10) with P_i its mean squared value, so all-zero patterns
/// stay unchanged. The unit-normal draws depend only on (seed, split), which
/// makes noise power strictly monotone in snr_db for a fixed seed.
[[nodiscard]] Dataset inject_noise(const Dataset& d, const NoiseSpec& spec);

/// 10·log10(Σ clean² / Σ (noisy − clean)²); +∞ when the inputs are identical.
[[nodiscard]] double measured_snr(const Dataset& clean, const Dataset& noisy);

struct SynthSpec {
    std::size_t length = 64;
    std::size_t train_size = 40;
    std::size_t test_size = 40;
    double noise_level = 0.6;
    std::uint64_t seed = 1;
};

/// Two-class "sine vs noisy sine" toy problem: class 0 is a clean sinusoid
/// of about three cycles, class 1 a sinusoid of about 1.5 cycles plus white
/// noise of standard deviation noise_level. Phase, amplitude and frequency
/// are jittered slightly. Classes alternate, so both splits are balanced.
[[nodiscard]] std::pair<Dataset, Dataset> make_synthetic(const SynthSpec& spec);

}  // namespace esnrae
