#include "esnrae/classify.hpp"

#include "esnrae/container.hpp"
#include "esnrae/error.hpp"
#include "esnrae/kernels.hpp"
#include "esnrae/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace esnrae {
namespace {

// Standardized features with a trailing constant 1, one row per pattern.
Matrix design_rows(const Matrix& features, const Vector& mean, const Vector& scale) {
    const std::size_t f = features.rows();
    Matrix x(features.cols(), f + 1);
    for (std::size_t j = 0; j < f; ++j) {
        for (std::size_t i = 0; i < features.cols(); ++i) x(i, j) = (features(j, i) - mean[j]) / scale[j];
    }
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, f) = 1.0;
    return x;
}

}  // namespace

LinearClassifier train_classifier(const Matrix& features, std::span<const int> labels,
                                  const ClassifierParams& params) {
    if (features.cols() != labels.size()) {
        throw ShapeError("train_classifier: " + std::to_string(features.cols()) +
                         " feature columns but " + std::to_string(labels.size()) + " labels");
    }
    if (!(params.lambda > 0.0)) throw ParameterError("classifier lambda must be positive");
    if (params.epochs == 0) throw ParameterError("classifier needs at least one epoch");
    if (labels.empty()) throw ParameterError("train_classifier: no training patterns");
    if (*std::min_element(labels.begin(), labels.end()) < 0) throw ParameterError("negative class id");
    const auto n_classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    std::vector<std::size_t> counts(n_classes, 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    if (present < 2) throw ParameterError("classification needs at least two classes");

    const std::size_t f = features.rows();
    const std::size_t p = features.cols();
    LinearClassifier c;
    c.params = params;
    c.feature_mean.assign(f, 0.0);
    c.feature_scale.assign(f, 1.0);
    for (std::size_t j = 0; j < f; ++j) {
        const auto row = features.row(j);
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(p);
        double var = 0.0;
        for (double v : row) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(p));
        c.feature_mean[j] = mean;
        c.feature_scale[j] = sd > 0.0 ? sd : 1.0;
    }
    const Matrix x = design_rows(features, c.feature_mean, c.feature_scale);
    const auto& k = kernels::active();

    c.weights = Matrix(n_classes, f + 1);
    for (std::size_t cls = 0; cls < n_classes; ++cls) {
        SeededRng rng(params.seed, "classifier/order");
        std::vector<std::size_t> order(p);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Vector w(f + 1, 0.0), avg(f + 1, 0.0);
        std::size_t t = 0;
        for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
            for (std::size_t i = p; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
            for (std::size_t idx : order) {
                ++t;
                const double eta = 1.0 / (params.lambda * static_cast<double>(t));
                const double y = labels[idx] == static_cast<int>(cls) ? 1.0 : -1.0;
                const auto xi = x.row(idx);
                const double margin = y * k.dot(w.data(), xi.data(), f + 1);
                const double shrink = 1.0 - eta * params.lambda;
                for (double& v : w) v *= shrink;
                if (margin < 1.0) {
                    for (std::size_t j = 0; j <= f; ++j) w[j] += eta * y * xi[j];
                }
                const double mix = 1.0 / static_cast<double>(t);
                for (std::size_t j = 0; j <= f; ++j) avg[j] += (w[j] - avg[j]) * mix;
            }
        }
        std::copy(avg.begin(), avg.end(), c.weights.row(cls).begin());
    }
    if (!c.weights.all_finite()) throw NumericalError("classifier training diverged");
    return c;
}

Matrix class_scores(const LinearClassifier& c, const Matrix& features) {
    if (features.rows() != c.num_features()) {
        throw ShapeError("classifier expects " + std::to_string(c.num_features()) +
                         " features, got " + std::to_string(features.rows()));
    }
    const Matrix x = design_rows(features, c.feature_mean, c.feature_scale);
    Matrix scores(c.num_classes(), x.rows());
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        Vector s(c.num_classes());
        k.gemv(c.weights.data().data(), c.weights.rows(), c.weights.cols(), x.row(i).data(), s.data());
        scores.set_col(i, s);
    }
    return scores;
}

std::vector<int> argmax_columns(const Matrix& scores) {
    std::vector<int> out(scores.cols(), 0);
    for (std::size_t i = 0; i < scores.cols(); ++i) {
        std::size_t best = 0;
        for (std::size_t cls = 1; cls < scores.rows(); ++cls) {
            if (scores(cls, i) > scores(best, i)) best = cls;
        }
        out[i] = static_cast<int>(best);
    }
    return out;
}

std::vector<int> predict(const LinearClassifier& c, const Matrix& features) {
    return argmax_columns(class_scores(c, features));
}

EvalResult evaluate_predictions(std::span<const int> predicted, std::span<const int> truth,
                                std::size_t n_classes) {
    if (predicted.size() != truth.size()) throw ShapeError("evaluate: prediction/label count mismatch");
    if (truth.empty()) throw ParameterError("evaluate: no testing patterns");
    EvalResult r;
    r.total = truth.size();
    r.confusion.assign(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto t = static_cast<std::size_t>(truth[i]);
        const auto p = static_cast<std::size_t>(predicted[i]);
        if (t >= n_classes || p >= n_classes) throw ParameterError("evaluate: class id out of range");
        ++r.confusion[t][p];
        if (t != p) ++r.misclassified;
    }
    r.error_rate = static_cast<double>(r.misclassified) / static_cast<double>(r.total);
    return r;
}

EvalResult evaluate(const LinearClassifier& c, const Matrix& features, std::span<const int> labels) {
    if (features.cols() != labels.size()) throw ShapeError("evaluate: feature/label count mismatch");
    const std::size_t n_classes = std::max<std::size_t>(
        c.num_classes(),
        labels.empty() ? 0 : static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1);
    return evaluate_predictions(predict(c, features), labels, n_classes);
}

void save_classifier(const LinearClassifier& c, std::ostream& out) {
    MatrixContainer box;
    box.add("weights", c.weights);
    box.add_vector("feature_mean", c.feature_mean);
    box.add_vector("feature_scale", c.feature_scale);
    box.add_vector("params", {c.params.lambda, static_cast<double>(c.params.epochs),
                              std::bit_cast<double>(c.params.seed)});
    box.write(out);
}

LinearClassifier load_classifier(std::istream& in) {
    const MatrixContainer box = MatrixContainer::read(in);
    LinearClassifier c;
    c.weights = box.get("weights");
    c.feature_mean = box.get_vector("feature_mean");
    c.feature_scale = box.get_vector("feature_scale");
    const Vector params = box.get_vector("params");
    if (params.size() != 3 || c.weights.cols() != c.feature_mean.size() + 1 ||
        c.feature_scale.size() != c.feature_mean.size()) {
        throw FormatError("inconsistent classifier container");
    }
    c.params.lambda = params[0];
    c.params.epochs = static_cast<std::size_t>(params[1]);
    c.params.seed = std::bit_cast<std::uint64_t>(params[2]);
    return c;
}

}  // namespace esnrae
