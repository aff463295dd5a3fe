#include "esnrae/reservoir.hpp"

#include "esnrae/container.hpp"
#include "esnrae/error.hpp"
#include "esnrae/kernels.hpp"
#include "esnrae/numerics.hpp"

#include <cmath>
#include <string>

namespace esnrae {
namespace {

std::string layer_name(const char* prefix, std::size_t index) {
    return std::string(prefix) + std::to_string(index + 1);
}

Vector uniform_vector(std::size_t n, double scale, SeededRng rng) {
    Vector v(n, 0.0);
    if (scale == 0.0) return v;
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return v;
}

Matrix recurrent_matrix(const ReservoirConfig& cfg, const SeededRng& rng, std::size_t layer) {
    const std::string base = layer_name("w", layer);
    for (int attempt = 0; attempt < kMaxReservoirRetries; ++attempt) {
        SeededRng stream = rng.substream(attempt == 0 ? base : base + "#retry" + std::to_string(attempt));
        const Matrix raw = sparse_random_matrix(cfg.n_hidden, cfg.n_hidden, cfg.connectivity,
                                                cfg.weight_low, cfg.weight_high, stream);
        try {
            return scale_to_spectral_radius(raw, cfg.spectral_radius_target);
        } catch (const DegenerateMatrixError&) {
            // nilpotent draw, try the next sub-stream
        }
    }
    throw DegenerateMatrixError("no reservoir with nonzero spectral radius after " +
                                std::to_string(kMaxReservoirRetries) + " draws (N=" +
                                std::to_string(cfg.n_hidden) + ", connectivity=" +
                                std::to_string(cfg.connectivity) + ")");
}

// Scratch buffers reused across the steps of one collection run.
struct Workspace {
    Vector input;  // [u; 1]
    LayerStates next;
};

void step_into(const EsnWeights& wts, const LayerStates& prev, std::span<const double> u,
               Workspace& ws) {
    const auto& k = kernels::active();
    const std::size_t n = wts.n_hidden;
    std::copy(u.begin(), u.end(), ws.input.begin());
    ws.input.back() = 1.0;

    for (std::size_t layer = 0; layer < wts.n_layers(); ++layer) {
        Vector& x = ws.next[layer];
        if (layer == 0) {
            k.gemv(wts.w_in.data().data(), n, wts.input_dim + 1, ws.input.data(), x.data());
        } else {
            k.gemv(wts.w_inter[layer - 1].data().data(), n, n, ws.next[layer - 1].data(), x.data());
        }
        if (wts.recurrent) k.gemv_add(wts.w[layer].data().data(), n, n, prev[layer].data(), x.data());
        const Vector& bias = wts.b_e[layer];
        for (std::size_t i = 0; i < n; ++i) x[i] = std::tanh(x[i] + bias[i]);
    }
}

}  // namespace

double ReservoirConfig::resolved_inter_scaling() const {
    if (inter_scaling) return *inter_scaling;
    return n_hidden == 0 ? 1.0 : std::sqrt(3.0 / static_cast<double>(n_hidden));
}

void ReservoirConfig::validate() const {
    if (n_hidden == 0) throw ParameterError("reservoir size N must be at least 1");
    if (!(connectivity > 0.0 && connectivity <= 1.0)) {
        throw ParameterError("connectivity must lie in (0, 1], got " + std::to_string(connectivity));
    }
    if (!(spectral_radius_target > 0.0 && spectral_radius_target < 1.0)) {
        throw ParameterError("spectral radius target must lie in (0, 1), got " +
                             std::to_string(spectral_radius_target));
    }
    if (n_layers == 0) throw ParameterError("layer count must be at least 1");
    if (input_dim == 0) throw ParameterError("input dimension K must be at least 1");
    if (!(input_scaling > 0.0) || !std::isfinite(input_scaling)) {
        throw ParameterError("input scaling must be positive");
    }
    if (inter_scaling && (!(*inter_scaling > 0.0) || !std::isfinite(*inter_scaling))) {
        throw ParameterError("inter-layer scaling must be positive");
    }
    if (!(bias_scale >= 0.0) || !(decoder_bias_scale >= 0.0)) {
        throw ParameterError("bias scales must be non-negative");
    }
    if (!(weight_low < weight_high)) throw ParameterError("weight range must satisfy low < high");
}

void EsnWeights::validate() const {
    const std::size_t m = b_e.size();
    if (m == 0) throw ShapeError("encoder has no layers");
    if (w_in.rows() != n_hidden || w_in.cols() != input_dim + 1) {
        throw ShapeError("W^in must be " + std::to_string(n_hidden) + "x" +
                         std::to_string(input_dim + 1) + ", got " + std::to_string(w_in.rows()) +
                         "x" + std::to_string(w_in.cols()));
    }
    if (recurrent ? w.size() != m : !w.empty()) throw ShapeError("recurrent matrix count mismatch");
    for (const auto& wi : w) {
        if (wi.rows() != n_hidden || wi.cols() != n_hidden) throw ShapeError("W^i must be N x N");
    }
    if (w_inter.size() + 1 != m) throw ShapeError("inter-layer matrix count must be M-1");
    for (const auto& wi : w_inter) {
        if (wi.rows() != n_hidden || wi.cols() != n_hidden) throw ShapeError("W^inter must be N x N");
    }
    for (const auto& b : b_e) {
        if (b.size() != n_hidden) throw ShapeError("b_e must have length N");
    }
    if (b_d.size() != input_dim) throw ShapeError("b_d must have length K");
}

EsnWeights init_weights(const ReservoirConfig& cfg, const SeededRng& rng, bool recurrent) {
    cfg.validate();
    EsnWeights wts;
    wts.n_hidden = cfg.n_hidden;
    wts.input_dim = cfg.input_dim;
    wts.recurrent = recurrent;

    SeededRng win = rng.substream("win");
    wts.w_in = dense_random_matrix(cfg.n_hidden, cfg.input_dim + 1, cfg.weight_low,
                                   cfg.weight_high, win);
    for (std::size_t i = 0; i < cfg.n_hidden; ++i) {
        for (std::size_t j = 0; j < cfg.input_dim; ++j) wts.w_in(i, j) *= cfg.input_scaling;
        wts.w_in(i, cfg.input_dim) *= cfg.bias_scale;
    }

    for (std::size_t layer = 0; layer < cfg.n_layers; ++layer) {
        if (recurrent) wts.w.push_back(recurrent_matrix(cfg, rng, layer));
        if (layer > 0) {
            SeededRng inter = rng.substream(layer_name("winter", layer - 1));
            wts.w_inter.push_back(dense_random_matrix(cfg.n_hidden, cfg.n_hidden, cfg.weight_low,
                                                      cfg.weight_high, inter));
            wts.w_inter.back() *= cfg.resolved_inter_scaling();
        }
        wts.b_e.push_back(
            uniform_vector(cfg.n_hidden, cfg.bias_scale, rng.substream(layer_name("be", layer))));
    }
    wts.b_d = uniform_vector(cfg.input_dim, cfg.decoder_bias_scale, rng.substream("bd"));
    return wts;
}

LayerStates zero_state(const EsnWeights& weights) {
    return LayerStates(weights.n_layers(), Vector(weights.n_hidden, 0.0));
}

LayerStates step(const EsnWeights& weights, const LayerStates& x_prev, std::span<const double> u) {
    if (u.size() != weights.input_dim) {
        throw ShapeError("step: input length " + std::to_string(u.size()) + " but K = " +
                         std::to_string(weights.input_dim));
    }
    if (x_prev.size() != weights.n_layers()) throw ShapeError("step: wrong number of layer states");
    for (const auto& x : x_prev) {
        if (x.size() != weights.n_hidden) throw ShapeError("step: layer state length must be N");
    }
    Workspace ws{Vector(weights.input_dim + 1), zero_state(weights)};
    step_into(weights, x_prev, u, ws);
    return std::move(ws.next);
}

StateTrace run_collect(const EsnWeights& weights, const Matrix& patterns, ResetPolicy policy) {
    weights.validate();
    if (patterns.cols() != weights.input_dim) {
        throw ShapeError("run_collect: pattern length " + std::to_string(patterns.cols()) +
                         " but the encoder expects K = " + std::to_string(weights.input_dim));
    }
    const std::size_t p = patterns.rows();
    const std::size_t m = weights.n_layers();
    StateTrace trace;
    trace.layers.assign(m, Matrix(weights.n_hidden, p));

    LayerStates state = zero_state(weights);
    Workspace ws{Vector(weights.input_dim + 1), zero_state(weights)};
    for (std::size_t n = 0; n < p; ++n) {
        if (policy == ResetPolicy::reset) state = zero_state(weights);
        step_into(weights, state, patterns.row(n), ws);
        std::swap(state, ws.next);
        for (std::size_t layer = 0; layer < m; ++layer) trace.layers[layer].set_col(n, state[layer]);
    }
    trace.h = trace.layers.back();
    return trace;
}

StateTrace run_collect(const EsnWeights& weights, const Dataset& d, ResetPolicy policy) {
    return run_collect(weights, d.patterns, policy);
}

void save_weights(const EsnWeights& weights, std::ostream& out) {
    weights.validate();
    MatrixContainer c;
    c.add_vector("shape", {static_cast<double>(weights.n_layers()),
                           static_cast<double>(weights.n_hidden),
                           static_cast<double>(weights.input_dim), weights.recurrent ? 1.0 : 0.0});
    c.add("w_in", weights.w_in);
    for (std::size_t i = 0; i < weights.w.size(); ++i) c.add(layer_name("w", i), weights.w[i]);
    for (std::size_t i = 0; i < weights.w_inter.size(); ++i) {
        c.add(layer_name("w_inter", i), weights.w_inter[i]);
    }
    for (std::size_t i = 0; i < weights.b_e.size(); ++i) c.add_vector(layer_name("b_e", i), weights.b_e[i]);
    c.add_vector("b_d", weights.b_d);
    c.write(out);
}

EsnWeights load_weights(std::istream& in) {
    const MatrixContainer c = MatrixContainer::read(in);
    const Vector shape = c.get_vector("shape");
    if (shape.size() != 4) throw FormatError("weight container has a malformed shape entry");
    EsnWeights w;
    const auto m = static_cast<std::size_t>(shape[0]);
    w.n_hidden = static_cast<std::size_t>(shape[1]);
    w.input_dim = static_cast<std::size_t>(shape[2]);
    w.recurrent = shape[3] != 0.0;
    w.w_in = c.get("w_in");
    for (std::size_t i = 0; i < m; ++i) {
        if (w.recurrent) w.w.push_back(c.get(layer_name("w", i)));
        if (i > 0) w.w_inter.push_back(c.get(layer_name("w_inter", i - 1)));
        w.b_e.push_back(c.get_vector(layer_name("b_e", i)));
    }
    w.b_d = c.get_vector("b_d");
    try {
        w.validate();
    } catch (const ShapeError& e) {
        throw FormatError(std::string("inconsistent weight container: ") + e.what());
    }
    return w;
}

}  // namespace esnrae
