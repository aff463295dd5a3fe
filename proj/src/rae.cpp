#include "esnrae/rae.hpp"

#include "esnrae/container.hpp"
#include "esnrae/error.hpp"
#include "esnrae/numerics.hpp"
#include "format_util.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace esnrae {
namespace {

constexpr std::string_view kEnvelopeMagic = "ESNRAE-AUTOENCODER 1";
constexpr std::string_view kEndOfHeader = "end-of-header";

ReservoirConfig effective_config(const RaeTrainSpec& spec, AutoencoderKind kind) {
    ReservoirConfig cfg = spec.cfg;
    if (is_multilayer(kind)) {
        if (cfg.n_layers < 2) {
            throw ParameterError(std::string(kind_name(kind)) +
                                 " needs at least two layers, configuration has " +
                                 std::to_string(cfg.n_layers));
        }
    } else {
        cfg.n_layers = 1;
    }
    return cfg;
}

// Inputs as a K × p target matrix, shifted by the decoder bias.
Matrix reconstruction_targets(const Dataset& d, const Vector& b_d) {
    Matrix targets = d.patterns.transpose();
    for (std::size_t k = 0; k < targets.rows(); ++k) {
        for (double& v : targets.row(k)) v -= b_d[k];
    }
    return targets;
}

struct Candidate {
    EsnWeights weights;
    Matrix w_out;
    double error = std::numeric_limits<double>::infinity();
};

}  // namespace

std::string_view kind_name(AutoencoderKind kind) noexcept {
    switch (kind) {
        case AutoencoderKind::esn_rae: return "esn-rae";
        case AutoencoderKind::ml_esn_rae: return "ml-esn-rae";
        case AutoencoderKind::elm_ae: return "elm-ae";
        case AutoencoderKind::ml_elm_ae: return "ml-elm-ae";
    }
    return "unknown";
}

std::optional<AutoencoderKind> parse_kind(std::string_view name) noexcept {
    for (auto k : {AutoencoderKind::esn_rae, AutoencoderKind::ml_esn_rae, AutoencoderKind::elm_ae,
                   AutoencoderKind::ml_elm_ae}) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

bool is_recurrent(AutoencoderKind kind) noexcept {
    return kind == AutoencoderKind::esn_rae || kind == AutoencoderKind::ml_esn_rae;
}

bool is_multilayer(AutoencoderKind kind) noexcept {
    return kind == AutoencoderKind::ml_esn_rae || kind == AutoencoderKind::ml_elm_ae;
}

void RaeTrainSpec::validate() const {
    cfg.validate();
    if (n_candidates == 0) throw ParameterError("candidate count must be at least 1");
    if (pinv_tolerance && !(*pinv_tolerance >= 0.0)) {
        throw ParameterError("pinv tolerance must be non-negative");
    }
}

Matrix train_readout(const Matrix& h, const Matrix& targets, std::optional<double> pinv_tolerance) {
    if (h.cols() != targets.cols()) {
        throw ShapeError("train_readout: " + std::to_string(h.cols()) + " state columns but " +
                         std::to_string(targets.cols()) + " target columns");
    }
    if (h.count_nonzero() == 0) throw NumericalError("train_readout: state matrix is identically zero");
    return targets * pinv(h, pinv_tolerance);
}

double reconstruction_error(const Matrix& w_out, const Matrix& h, const Matrix& targets) {
    Matrix residual = w_out * h;
    residual -= targets;
    return frobenius_norm(residual) / static_cast<double>(h.cols());
}

TrainedAutoencoder fit(const Dataset& train, const RaeTrainSpec& spec, AutoencoderKind kind) {
    spec.validate();
    ReservoirConfig cfg = effective_config(spec, kind);
    if (cfg.input_dim != train.length()) {
        throw ShapeError("fit: configuration expects K = " + std::to_string(cfg.input_dim) +
                         " but patterns have length " + std::to_string(train.length()));
    }
    const bool recurrent = is_recurrent(kind);
    const SeededRng root(spec.seed, std::string("rae/") + std::string(kind_name(kind)));

    TrainedAutoencoder t;
    t.kind = kind;
    t.spec = spec;
    t.spec.cfg = cfg;
    t.candidate_errors.assign(spec.n_candidates, std::numeric_limits<double>::infinity());

    Candidate best;
    std::string last_failure;
    bool found = false;
    for (std::size_t c = 0; c < spec.n_candidates; ++c) {
        try {
            Candidate cand;
            cand.weights = init_weights(cfg, root.substream("candidate" + std::to_string(c)), recurrent);
            const Matrix targets = reconstruction_targets(train, cand.weights.b_d);
            const StateTrace trace = run_collect(cand.weights, train, spec.reset_policy);
            cand.w_out = train_readout(trace.h, targets, spec.pinv_tolerance);
            cand.error = reconstruction_error(cand.w_out, trace.h, targets);
            t.candidate_errors[c] = cand.error;
            if (!std::isfinite(cand.error)) continue;
            if (!found || cand.error < best.error) {
                best = std::move(cand);
                t.chosen_candidate = c;
                found = true;
            }
        } catch (const NumericalError& e) {
            last_failure = e.what();
        }
    }
    if (!found) {
        throw NumericalError("all " + std::to_string(spec.n_candidates) +
                             " candidate encoders were degenerate" +
                             (last_failure.empty() ? std::string() : ": " + last_failure));
    }

    // W^out is K × N against the last reservoir; all layers share N, so its
    // transpose fits the input columns of the first layer.
    t.pre_tying_error = best.error;
    t.tied_w_out = best.w_out;
    t.weights = std::move(best.weights);
    for (std::size_t i = 0; i < cfg.n_hidden; ++i) {
        for (std::size_t j = 0; j < cfg.input_dim; ++j) t.weights.w_in(i, j) = t.tied_w_out(j, i);
    }

    const Matrix targets = reconstruction_targets(train, t.weights.b_d);
    const StateTrace trace = run_collect(t.weights, train, spec.reset_policy);
    t.features_train = trace.h;
    t.w_out = train_readout(t.features_train, targets, spec.pinv_tolerance);
    t.reconstruction_error = reconstruction_error(t.w_out, t.features_train, targets);
    return t;
}

Matrix encode(const TrainedAutoencoder& t, const Dataset& d) {
    if (d.length() != t.weights.input_dim) {
        throw ShapeError("encode: patterns have length " + std::to_string(d.length()) +
                         " but the encoder was trained on K = " + std::to_string(t.weights.input_dim));
    }
    return run_collect(t.weights, d, t.spec.reset_policy).h;
}

void save_autoencoder(const TrainedAutoencoder& t, std::ostream& out) {
    using detail::format_double;
    const auto& cfg = t.spec.cfg;
    std::ostringstream header;
    header << kEnvelopeMagic << '\n'
           << "kind: " << kind_name(t.kind) << '\n'
           << "seed: " << t.spec.seed << '\n'
           << "n_candidates: " << t.spec.n_candidates << '\n'
           << "reset_policy: " << (t.spec.reset_policy == ResetPolicy::carry ? "carry" : "reset") << '\n'
           << "pinv_tolerance: "
           << (t.spec.pinv_tolerance ? format_double(*t.spec.pinv_tolerance) : std::string("default"))
           << '\n'
           << "n_hidden: " << cfg.n_hidden << '\n'
           << "connectivity: " << format_double(cfg.connectivity) << '\n'
           << "spectral_radius: " << format_double(cfg.spectral_radius_target) << '\n'
           << "n_layers: " << cfg.n_layers << '\n'
           << "input_dim: " << cfg.input_dim << '\n'
           << "input_scaling: " << format_double(cfg.input_scaling) << '\n'
           << "bias_scale: " << format_double(cfg.bias_scale) << '\n'
           << "inter_scaling: " << (cfg.inter_scaling ? format_double(*cfg.inter_scaling) : std::string("auto"))
           << '\n'
           << "decoder_bias_scale: " << format_double(cfg.decoder_bias_scale) << '\n'
           << "weight_low: " << format_double(cfg.weight_low) << '\n'
           << "weight_high: " << format_double(cfg.weight_high) << '\n'
           << "chosen_candidate: " << t.chosen_candidate << '\n'
           << "pre_tying_error: " << format_double(t.pre_tying_error) << '\n'
           << "reconstruction_error: " << format_double(t.reconstruction_error) << '\n'
           << "candidate_errors:";
    for (double e : t.candidate_errors) header << ' ' << format_double(e);
    header << '\n' << kEndOfHeader << '\n';
    out << header.str();

    std::ostringstream weights;
    save_weights(t.weights, weights);
    MatrixContainer extra;
    extra.add("tied_w_out", t.tied_w_out);
    extra.add("w_out", t.w_out);
    extra.add("features_train", t.features_train);
    out << weights.str();
    extra.write(out);
    if (!out) throw IoError("failed to write autoencoder");
}

TrainedAutoencoder load_autoencoder(std::istream& in) {
    using detail::parse_double;
    using detail::parse_unsigned;
    std::string line;
    if (!std::getline(in, line) || line != kEnvelopeMagic) {
        throw FormatError("not an autoencoder file (missing '" + std::string(kEnvelopeMagic) + "')");
    }
    std::map<std::string, std::string, std::less<>> fields;
    while (std::getline(in, line) && line != kEndOfHeader) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw FormatError("malformed header line '" + line + "'");
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        fields[line.substr(0, colon)] = value;
    }
    if (line != kEndOfHeader) throw FormatError("autoencoder header not terminated");
    const auto field = [&](std::string_view key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) throw FormatError("autoencoder header lacks '" + std::string(key) + "'");
        return it->second;
    };

    TrainedAutoencoder t;
    const auto kind = parse_kind(field("kind"));
    if (!kind) throw FormatError("unknown autoencoder kind '" + field("kind") + "'");
    t.kind = *kind;
    t.spec.seed = parse_unsigned(field("seed"), "seed");
    t.spec.n_candidates = parse_unsigned(field("n_candidates"), "n_candidates");
    const std::string& policy = field("reset_policy");
    if (policy != "carry" && policy != "reset") throw FormatError("unknown reset policy '" + policy + "'");
    t.spec.reset_policy = policy == "carry" ? ResetPolicy::carry : ResetPolicy::reset;
    if (field("pinv_tolerance") != "default") {
        t.spec.pinv_tolerance = parse_double(field("pinv_tolerance"), "pinv_tolerance");
    }
    auto& cfg = t.spec.cfg;
    cfg.n_hidden = parse_unsigned(field("n_hidden"), "n_hidden");
    cfg.connectivity = parse_double(field("connectivity"), "connectivity");
    cfg.spectral_radius_target = parse_double(field("spectral_radius"), "spectral_radius");
    cfg.n_layers = parse_unsigned(field("n_layers"), "n_layers");
    cfg.input_dim = parse_unsigned(field("input_dim"), "input_dim");
    cfg.input_scaling = parse_double(field("input_scaling"), "input_scaling");
    cfg.bias_scale = parse_double(field("bias_scale"), "bias_scale");
    if (field("inter_scaling") != "auto") {
        cfg.inter_scaling = parse_double(field("inter_scaling"), "inter_scaling");
    }
    cfg.decoder_bias_scale = parse_double(field("decoder_bias_scale"), "decoder_bias_scale");
    cfg.weight_low = parse_double(field("weight_low"), "weight_low");
    cfg.weight_high = parse_double(field("weight_high"), "weight_high");
    t.chosen_candidate = parse_unsigned(field("chosen_candidate"), "chosen_candidate");
    t.pre_tying_error = parse_double(field("pre_tying_error"), "pre_tying_error");
    t.reconstruction_error = parse_double(field("reconstruction_error"), "reconstruction_error");
    std::istringstream errors(field("candidate_errors"));
    std::string token;
    while (errors >> token) t.candidate_errors.push_back(parse_double(token, "candidate_errors"));

    t.weights = load_weights(in);
    const MatrixContainer extra = MatrixContainer::read(in);
    t.tied_w_out = extra.get("tied_w_out");
    t.w_out = extra.get("w_out");
    t.features_train = extra.get("features_train");
    return t;
}

}  // namespace esnrae
