#pragma once

#include "esnrae/dataio.hpp"
#include "esnrae/matrix.hpp"
#include "esnrae/reservoir.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace esnrae {

enum class AutoencoderKind { esn_rae, ml_esn_rae, elm_ae, ml_elm_ae };

[[nodiscard]] std::string_view kind_name(AutoencoderKind kind) noexcept;
/// Parses "esn-rae", "ml-esn-rae", "elm-ae" or "ml-elm-ae".
[[nodiscard]] std::optional<AutoencoderKind> parse_kind(std::string_view name) noexcept;
[[nodiscard]] bool is_recurrent(AutoencoderKind kind) noexcept;
[[nodiscard]] bool is_multilayer(AutoencoderKind kind) noexcept;

struct RaeTrainSpec {
    ReservoirConfig cfg;
    std::size_t n_candidates = 10;
    std::uint64_t seed = 0;
    ResetPolicy reset_policy = ResetPolicy::carry;
    std::optional<double> pinv_tolerance;  // default: 1e-12·max(dims)

    void validate() const;
};

struct TrainedAutoencoder {
    AutoencoderKind kind = AutoencoderKind::esn_rae;
    RaeTrainSpec spec;
    /// Encoder after tying: the first K columns of W^in equal tied_w_out^T.
    EsnWeights weights;
    /// Readout of the selected candidate, the matrix written into W^in.
    Matrix tied_w_out;
    /// Readout refit on the recomputed states (K × N); reconstruction_error
    /// refers to this decoder.
    Matrix w_out;
    double pre_tying_error = 0.0;
    double reconstruction_error = 0.0;
    Matrix features_train;  // N × p, recomputed after tying
    std::size_t chosen_candidate = 0;
    std::vector<double> candidate_errors;
};

/// Least-squares readout W^out = targets · pinv(H), so that ŷ = W^out·x.
/// `h` is N × p (one state column per pattern), `targets` is K × p.
/// @throws NumericalError when H is identically zero.
[[nodiscard]] Matrix train_readout(const Matrix& h, const Matrix& targets,
                                   std::optional<double> pinv_tolerance = std::nullopt);

/// ‖W^out·H − targets‖_F divided by the pattern count.
[[nodiscard]] double reconstruction_error(const Matrix& w_out, const Matrix& h,
                                          const Matrix& targets);

/// Trains an autoencoder on the patterns of `train`:
///  1. draw spec.n_candidates random encoders,
///  2. collect states and fit each readout to reproduce the inputs,
///  3. keep the candidate with the smallest reconstruction error (lowest
///     index on ties),
///  4. copy W^out^T into the non-bias columns of the first layer's W^in,
///  5. recompute every layer's states with the tied encoder in one pass,
///  6. refit the readout on those states.
///
/// Basic kinds always use a single layer; multi-layer kinds require
/// spec.cfg.n_layers >= 2. Feed-forward kinds carry no recurrent matrices.
[[nodiscard]] TrainedAutoencoder fit(const Dataset& train, const RaeTrainSpec& spec,
                                     AutoencoderKind kind);

/// Final-layer states of `d` under the tied encoder (N × p).
[[nodiscard]] Matrix encode(const TrainedAutoencoder& t, const Dataset& d);

/// Text envelope (metadata lines) followed by the binary weight container.
void save_autoencoder(const TrainedAutoencoder& t, std::ostream& out);
[[nodiscard]] TrainedAutoencoder load_autoencoder(std::istream& in);

}  // namespace esnrae
