#include "esnrae/presets.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace esnrae {
namespace {

constexpr std::array<DatasetPreset, 7> kPresets{{
    {"ecg200", "ECG200", 150, 0.1, 100, 100, 96, 2},
    {"breast-cancer", "BreastCancer", 50, 0.05, 500, 199, 9, 2},
    {"coffee", "Coffee", 100, 0.1, 28, 28, 286, 2},
    {"olive-oil", "OliveOil", 300, 0.001, 30, 30, 570, 4},
    {"earthquakes", "Earthquakes", 600, 0.002, 139, 322, 512, 2},
    {"meat", "Meat", 250, 0.01, 60, 60, 448, 3},
    {"ecgfivedays", "ECGFiveDays", 100, 0.04, 23, 861, 136, 2},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::span<const DatasetPreset> dataset_presets() noexcept { return kPresets; }

std::optional<DatasetPreset> find_preset(std::string_view name) noexcept {
    for (const auto& p : kPresets) {
        if (iequals(p.key, name) || iequals(p.archive, name)) return p;
    }
    return std::nullopt;
}

ReservoirConfig preset_config(const DatasetPreset& preset) {
    ReservoirConfig cfg;
    cfg.n_hidden = preset.n_hidden;
    cfg.connectivity = preset.connectivity;
    cfg.n_layers = kPresetLayers;
    cfg.input_dim = preset.length;
    return cfg;
}

std::optional<std::pair<std::filesystem::path, std::filesystem::path>>
find_ucr_files(const std::filesystem::path& dir, std::string_view archive) {
    const std::filesystem::path base = dir / std::string(archive);
    auto locate = [&](const char* suffix) -> std::optional<std::filesystem::path> {
        for (const char* ext : {".txt", ".tsv", ""}) {
            auto p = base / (std::string(archive) + suffix + ext);
            std::error_code ec;
            if (std::filesystem::is_regular_file(p, ec)) return p;
        }
        return std::nullopt;
    };
    auto train = locate("_TRAIN");
    auto test = locate("_TEST");
    if (!train || !test) return std::nullopt;
    return std::pair{*train, *test};
}

}  // namespace esnrae
