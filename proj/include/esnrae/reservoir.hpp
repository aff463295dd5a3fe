#pragma once

// Echo state network encoders: the single-reservoir ESN and the stacked
// multi-reservoir ML-ESN, plus their feed-forward (ELM) counterparts obtained
// by dropping the recurrent matrices.

#include "esnrae/dataio.hpp"
#include "esnrae/matrix.hpp"
#include "esnrae/rng.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace esnrae {

struct ReservoirConfig {
    std::size_t n_hidden = 100;           // N, shared by every layer
    double connectivity = 0.1;            // β, fraction of nonzeros in each W^i
    double spectral_radius_target = 0.9;  // ρ
    std::size_t n_layers = 1;             // M
    std::size_t input_dim = 0;            // K
    double input_scaling = 1.0;           // input columns of the random W^in (before tying)
    double bias_scale = 0.1;              // bias column of W^in and b_e; 0 disables both
    std::optional<double> inter_scaling;  // multiplies each W^inter; default sqrt(3/N), unit expected row norm
    double decoder_bias_scale = 0.0;      // b_d ~ U[-s, s]
    double weight_low = -1.0;
    double weight_high = 1.0;

    [[nodiscard]] double resolved_inter_scaling() const;

    /// @throws ParameterError naming the offending field.
    void validate() const;
};

enum class ResetPolicy { carry, reset };

/// Weights of an (ML-)ESN encoder. W^in carries the bias column last: the
/// first layer sees the extended input [u; 1].
struct EsnWeights {
    std::size_t n_hidden = 0;
    std::size_t input_dim = 0;
    bool recurrent = true;

    Matrix w_in;                 // N × (K+1)
    std::vector<Matrix> w;       // M recurrent matrices, N × N; empty if !recurrent
    std::vector<Matrix> w_inter; // M-1 inter-layer matrices, N × N
    std::vector<Vector> b_e;     // M encoder biases, length N
    Vector b_d;                  // decoder bias, length K

    [[nodiscard]] std::size_t n_layers() const noexcept { return b_e.size(); }

    /// @throws ShapeError on inconsistent dimensions.
    void validate() const;
};

/// Random encoder weights. Each W^i is sparse at the configured connectivity
/// and rescaled to the target spectral radius; a draw with zero spectral
/// radius (possible at very low connectivity) is replaced by a fresh draw
/// from the next retry sub-stream.
[[nodiscard]] EsnWeights init_weights(const ReservoirConfig& cfg, const SeededRng& rng,
                                      bool recurrent = true);

inline constexpr int kMaxReservoirRetries = 64;

using LayerStates = std::vector<Vector>;

[[nodiscard]] LayerStates zero_state(const EsnWeights& weights);

/// One update of every layer. Layer k > 1 is driven by the state layer k-1
/// has just computed in this same step.
[[nodiscard]] LayerStates step(const EsnWeights& weights, const LayerStates& x_prev,
                               std::span<const double> u);

/// Final-layer states, one column per pattern (N × p), plus every layer's
/// trace in the same layout.
struct StateTrace {
    Matrix h;
    std::vector<Matrix> layers;

    [[nodiscard]] std::size_t patterns() const noexcept { return h.cols(); }
};

/// Feeds the patterns of `d` in order, starting from the zero state. Under
/// `carry` the state flows from one pattern to the next; under `reset` it is
/// zeroed before every pattern.
[[nodiscard]] StateTrace run_collect(const EsnWeights& weights, const Dataset& d,
                                     ResetPolicy policy = ResetPolicy::carry);
[[nodiscard]] StateTrace run_collect(const EsnWeights& weights, const Matrix& patterns,
                                     ResetPolicy policy = ResetPolicy::carry);

/// Binary weight container: see container.hpp for the byte layout.
void save_weights(const EsnWeights& weights, std::ostream& out);
[[nodiscard]] EsnWeights load_weights(std::istream& in);

}  // namespace esnrae
