#pragma once

#include "esnrae/matrix.hpp"
#include "esnrae/rng.hpp"

#include <cstddef>
#include <optional>

namespace esnrae {

/// Sparse random matrix with exactly round(density·rows·cols) nonzeros.
///
/// Positions are drawn without replacement (partial Fisher–Yates over the
/// flattened index range); values are uniform in [low, high). A drawn value of
/// exactly zero is redrawn so the nonzero count is exact.
[[nodiscard]] Matrix sparse_random_matrix(std::size_t rows, std::size_t cols, double density,
                                          double low, double high, SeededRng& rng);

/// Dense uniform matrix in [low, high).
[[nodiscard]] Matrix dense_random_matrix(std::size_t rows, std::size_t cols, double low,
                                         double high, SeededRng& rng);

[[nodiscard]] double default_pinv_tolerance(std::size_t rows, std::size_t cols) noexcept;

/// Moore–Penrose pseudo-inverse through the SVD. Singular values at or below
/// tolerance·σ_max are treated as zero. Without a tolerance the default
/// 1e-12·max(rows, cols) is used.
[[nodiscard]] Matrix pinv(const Matrix& m, std::optional<double> tolerance = std::nullopt);

/// max |λ| over the eigenvalues of a square matrix.
///
/// The sparsity graph is split into strongly connected components first: a
/// symmetric permutation puts the matrix in block-triangular form whose
/// eigenvalues are those of the diagonal blocks, so only the nontrivial
/// components go through the dense eigensolver. Components without a cycle
/// contribute zero.
[[nodiscard]] double spectral_radius(const Matrix& w);

/// w · (target / spectral_radius(w)).
/// @throws DegenerateMatrixError when w has zero spectral radius.
[[nodiscard]] Matrix scale_to_spectral_radius(const Matrix& w, double target);

}  // namespace esnrae
