#include "esnrae/dataio.hpp"

#include "esnrae/error.hpp"
#include "esnrae/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string_view>

namespace esnrae {
namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(trim(line.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return fields;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

double parse_real(std::string_view field, std::size_t line_no, const std::string& name) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw FormatError(name + ":" + std::to_string(line_no) + ": non-numeric field '" +
                          std::string(field) + "'");
    }
    return value;
}

}  // namespace

const char* split_name(Split s) noexcept { return s == Split::train ? "train" : "test"; }

Dataset parse_ucr_text(const std::string& text, std::string name, Split split,
                       const std::vector<long long>* label_map) {
    std::vector<long long> raw_labels;
    std::vector<double> values;
    std::size_t length = 0;
    std::size_t line_no = 0;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto fields = split_fields(view);
        if (fields.size() < 2) {
            throw FormatError(name + ":" + std::to_string(line_no) +
                              ": expected a label followed by at least one value");
        }
        const double label = parse_real(fields[0], line_no, name);
        if (label != std::floor(label)) {
            throw FormatError(name + ":" + std::to_string(line_no) + ": class label '" +
                              std::string(fields[0]) + "' is not an integer");
        }
        if (raw_labels.empty()) {
            length = fields.size() - 1;
        } else if (fields.size() - 1 != length) {
            throw FormatError(name + ":" + std::to_string(line_no) + ": ragged row with " +
                              std::to_string(fields.size() - 1) + " values, expected " +
                              std::to_string(length));
        }
        raw_labels.push_back(std::llround(label));
        for (std::size_t f = 1; f < fields.size(); ++f) {
            values.push_back(parse_real(fields[f], line_no, name));
        }
    }
    if (raw_labels.empty()) throw FormatError(name + ": empty dataset file");

    Dataset d;
    d.name = std::move(name);
    d.split = split;
    if (label_map != nullptr) {
        d.label_map = *label_map;
    } else {
        d.label_map = raw_labels;
        std::sort(d.label_map.begin(), d.label_map.end());
        d.label_map.erase(std::unique(d.label_map.begin(), d.label_map.end()), d.label_map.end());
    }
    d.labels.reserve(raw_labels.size());
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        const auto it = std::find(d.label_map.begin(), d.label_map.end(), raw_labels[i]);
        if (it == d.label_map.end()) {
            throw FormatError(d.name + ": pattern " + std::to_string(i + 1) + " has label " +
                              std::to_string(raw_labels[i]) + " unknown to the reference label map");
        }
        d.labels.push_back(static_cast<int>(it - d.label_map.begin()));
    }
    d.patterns = Matrix(raw_labels.size(), length, std::move(values));
    return d;
}

Dataset parse_ucr(const std::filesystem::path& path, Split split,
                  const std::vector<long long>* label_map) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open dataset file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_ucr_text(buffer.str(), path.stem().string(), split, label_map);
}

std::string serialize_ucr(const Dataset& d) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += std::to_string(d.label_map.at(static_cast<std::size_t>(d.labels[i])));
        for (double v : d.patterns.row(i)) {
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out += ',';
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

void write_ucr(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << serialize_ucr(d);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Dataset normalize(const Dataset& d, const Dataset& stats_from) {
    if (d.length() != stats_from.length()) {
        throw ShapeError("normalize: pattern length " + std::to_string(d.length()) +
                         " differs from reference length " + std::to_string(stats_from.length()));
    }
    const std::size_t k = d.length();
    const auto p = static_cast<double>(stats_from.size());
    std::vector<double> mean(k, 0.0), stddev(k, 0.0);
    for (std::size_t i = 0; i < stats_from.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) mean[j] += stats_from.patterns(i, j);
    }
    for (auto& m : mean) m /= p;
    for (std::size_t i = 0; i < stats_from.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double dev = stats_from.patterns(i, j) - mean[j];
            stddev[j] += dev * dev;
        }
    }
    for (auto& s : stddev) s = std::sqrt(s / p);

    Dataset out = d;
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (stddev[j] > 0.0) out.patterns(i, j) = (d.patterns(i, j) - mean[j]) / stddev[j];
        }
    }
    return out;
}

Dataset scale_patterns(const Dataset& d, double factor) {
    Dataset out = d;
    out.patterns *= factor;
    return out;
}

Dataset inject_noise(const Dataset& d, const NoiseSpec& spec) {
    if (d.size() == 0) throw ParameterError("inject_noise: empty dataset");
    if (std::isnan(spec.snr_db)) throw ParameterError("inject_noise: SNR is NaN");
    Dataset out = d;
    if (spec.snr_db >= kNoiseFreeSnrDb) return out;

    SeededRng rng(spec.seed, std::string("noise/") + split_name(d.split));
    const double ratio = std::pow(10.0, spec.snr_db / 10.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto row = out.patterns.row(i);
        double power = 0.0;
        for (double v : row) power += v * v;
        power /= static_cast<double>(row.size());
        const double sigma = std::sqrt(power / ratio);
        // Draw even when sigma is zero so later patterns see the same stream.
        for (double& v : row) v += sigma * rng.normal();
    }
    return out;
}

double measured_snr(const Dataset& clean, const Dataset& noisy) {
    if (clean.patterns.rows() != noisy.patterns.rows() ||
        clean.patterns.cols() != noisy.patterns.cols()) {
        throw ShapeError("measured_snr: datasets differ in shape");
    }
    double signal = 0.0, noise = 0.0;
    for (std::size_t i = 0; i < clean.patterns.size(); ++i) {
        const double c = clean.patterns.data()[i];
        const double e = noisy.patterns.data()[i] - c;
        signal += c * c;
        noise += e * e;
    }
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / noise);
}

std::pair<Dataset, Dataset> make_synthetic(const SynthSpec& spec) {
    if (spec.length < 2 || spec.train_size < 2 || spec.test_size < 2) {
        throw ParameterError("synthetic dataset needs length >= 2 and at least 2 patterns per split");
    }
    auto build = [&](Split split, std::size_t count) {
        SeededRng rng(spec.seed, std::string("synth/") + split_name(split));
        Dataset d;
        d.name = "synthetic";
        d.split = split;
        d.label_map = {0, 1};
        d.patterns = Matrix(count, spec.length);
        for (std::size_t i = 0; i < count; ++i) {
            const int label = static_cast<int>(i % 2);
            const double phase = rng.uniform(-0.25, 0.25);
            const double amplitude = rng.uniform(0.8, 1.2);
            const double cycles = label == 0 ? rng.uniform(2.8, 3.2) : rng.uniform(1.3, 1.7);
            for (std::size_t t = 0; t < spec.length; ++t) {
                const double x = static_cast<double>(t) / static_cast<double>(spec.length);
                double v = amplitude * std::sin(2.0 * std::numbers::pi * cycles * x + phase);
                const double z = rng.normal();
                if (label == 1) v += spec.noise_level * z;
                d.patterns(i, t) = v;
            }
            d.labels.push_back(label);
        }
        return d;
    };
    return {build(Split::train, spec.train_size), build(Split::test, spec.test_size)};
}

}  // namespace esnrae
