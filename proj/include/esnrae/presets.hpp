#pragma once

#include "esnrae/reservoir.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

namespace esnrae {

/// Published reservoir settings and dataset shapes for the seven benchmark
/// datasets. Every preset uses tanh hidden units and a linear readout; the
/// multi-layer variants stack two equally sized reservoirs.
struct DatasetPreset {
    std::string_view key;       // CLI name, e.g. "ecg200"
    std::string_view archive;   // directory / file stem, e.g. "ECG200"
    std::size_t n_hidden;
    double connectivity;
    std::size_t train_size;
    std::size_t test_size;
    std::size_t length;
    std::size_t classes;
};

inline constexpr std::size_t kPresetLayers = 2;

[[nodiscard]] std::span<const DatasetPreset> dataset_presets() noexcept;
/// Case-insensitive lookup by key or archive name.
[[nodiscard]] std::optional<DatasetPreset> find_preset(std::string_view name) noexcept;

/// Reservoir configuration for `preset` with library defaults elsewhere
/// (ρ = 0.9, uniform [-1, 1] weights) and n_layers = 2.
[[nodiscard]] ReservoirConfig preset_config(const DatasetPreset& preset);

/// Locates <dir>/<archive>/<archive>_TRAIN and _TEST with a .txt, .tsv or
/// no extension; nullopt unless both exist.
[[nodiscard]] std::optional<std::pair<std::filesystem::path, std::filesystem::path>>
find_ucr_files(const std::filesystem::path& dir, std::string_view archive);

}  // namespace esnrae
