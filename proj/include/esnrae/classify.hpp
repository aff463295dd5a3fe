#pragma once

#include "esnrae/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace esnrae {

struct ClassifierParams {
    double lambda = 1e-4;     // L2 regularization strength
    std::size_t epochs = 50;
    std::uint64_t seed = 0;   // shuffling order
};

/// One-vs-rest linear max-margin classifier.
///
/// `weights` is C × (F+1), the last column being the bias; scores are taken
/// on features standardized with the training mean and deviation.
struct LinearClassifier {
    Matrix weights;
    Vector feature_mean;
    Vector feature_scale;
    ClassifierParams params;

    [[nodiscard]] std::size_t num_classes() const noexcept { return weights.rows(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return feature_mean.size(); }
};

/// Hinge-loss hyperplanes trained by epoch-based stochastic subgradient
/// descent (step 1/(λt), one shuffled pass per epoch); the returned weights
/// are the average of all iterates. `features` is F × p, one column per
/// pattern; labels are class ids 0..C-1.
/// @throws ParameterError for fewer than two classes.
[[nodiscard]] LinearClassifier train_classifier(const Matrix& features, std::span<const int> labels,
                                                const ClassifierParams& params = {});

/// Class scores, C × p.
[[nodiscard]] Matrix class_scores(const LinearClassifier& c, const Matrix& features);

/// Row-wise argmax of a score matrix laid out C × p, lowest class on ties.
[[nodiscard]] std::vector<int> argmax_columns(const Matrix& scores);

[[nodiscard]] std::vector<int> predict(const LinearClassifier& c, const Matrix& features);

struct EvalResult {
    double error_rate = 0.0;
    std::size_t misclassified = 0;
    std::size_t total = 0;
    /// confusion[truth][predicted]
    std::vector<std::vector<std::size_t>> confusion;
};

/// Error rate = misclassified / total testing patterns.
[[nodiscard]] EvalResult evaluate_predictions(std::span<const int> predicted,
                                              std::span<const int> truth, std::size_t n_classes);
[[nodiscard]] EvalResult evaluate(const LinearClassifier& c, const Matrix& features,
                                  std::span<const int> labels);

void save_classifier(const LinearClassifier& c, std::ostream& out);
[[nodiscard]] LinearClassifier load_classifier(std::istream& in);

}  // namespace esnrae
