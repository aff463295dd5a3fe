#include "esnrae/numerics.hpp"

#include "esnrae/error.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace esnrae {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const Matrix& m) {
    return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
            static_cast<Eigen::Index>(m.cols())};
}

void check_range(double low, double high) {
    if (!(low < high) || !std::isfinite(low) || !std::isfinite(high)) {
        throw ParameterError("random range must satisfy low < high (got [" + std::to_string(low) +
                             ", " + std::to_string(high) + "])");
    }
}

// Iterative Tarjan over the nonzero pattern; returns the component id of each
// vertex and the number of components.
std::vector<std::size_t> strongly_connected_components(const Matrix& w, std::size_t& count) {
    const std::size_t n = w.rows();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (w(i, j) != 0.0) adj[i].push_back(j);
        }
    }

    constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
    std::size_t next_index = 0;
    count = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge < adj[v].size()) {
                const std::size_t u = adj[v][edge++];
                if (index[u] == kUnvisited) {
                    index[u] = low[u] = next_index++;
                    stack.push_back(u);
                    on_stack[u] = true;
                    call.emplace_back(u, 0);
                } else if (on_stack[u]) {
                    low[v] = std::min(low[v], index[u]);
                }
                continue;
            }
            const std::size_t finished = v;
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
            if (low[finished] == index[finished]) {
                std::size_t u;
                do {
                    u = stack.back();
                    stack.pop_back();
                    on_stack[u] = false;
                    comp[u] = count;
                } while (u != finished);
                ++count;
            }
        }
    }
    return comp;
}

double block_spectral_radius(const Matrix& w, const std::vector<std::size_t>& members) {
    const auto n = static_cast<Eigen::Index>(members.size());
    if (n == 1) return std::abs(w(members[0], members[0]));
    Eigen::MatrixXd block(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) block(i, j) = w(members[i], members[j]);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(block, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge on a " + std::to_string(n) + "x" +
                             std::to_string(n) + " reservoir block");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Matrix sparse_random_matrix(std::size_t rows, std::size_t cols, double density, double low,
                            double high, SeededRng& rng) {
    if (!(density > 0.0 && density <= 1.0)) {
        throw ParameterError("density must lie in (0, 1], got " + std::to_string(density));
    }
    check_range(low, high);
    if (rows == 0 || cols == 0) throw ParameterError("sparse_random_matrix: empty shape");

    const std::size_t total = rows * cols;
    const auto nonzeros = static_cast<std::size_t>(std::llround(density * static_cast<double>(total)));

    std::vector<std::size_t> slots(total);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t k = 0; k < nonzeros; ++k) {
        const std::size_t pick = k + rng.uniform_index(total - k);
        std::swap(slots[k], slots[pick]);
    }

    Matrix m(rows, cols);
    for (std::size_t k = 0; k < nonzeros; ++k) {
        double v = rng.uniform(low, high);
        while (v == 0.0) v = rng.uniform(low, high);
        m.data()[slots[k]] = v;
    }
    return m;
}

Matrix dense_random_matrix(std::size_t rows, std::size_t cols, double low, double high,
                           SeededRng& rng) {
    check_range(low, high);
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = rng.uniform(low, high);
    return m;
}

double default_pinv_tolerance(std::size_t rows, std::size_t cols) noexcept {
    return 1e-12 * static_cast<double>(std::max(rows, cols));
}

Matrix pinv(const Matrix& m, std::optional<double> tolerance) {
    if (m.empty()) throw ShapeError("pinv of an empty matrix");
    if (!m.all_finite()) throw NumericalError("pinv: input contains non-finite entries");
    const double tol = tolerance.value_or(default_pinv_tolerance(m.rows(), m.cols()));
    if (!(tol >= 0.0)) throw ParameterError("pinv tolerance must be non-negative");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(as_eigen(m)),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("SVD did not converge for a " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + " matrix (Eigen status " +
                             std::to_string(static_cast<int>(svd.info())) + ")");
    }
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0 ? tol * sigma(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
    }
    const Eigen::MatrixXd result = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

    Matrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) {
            out(r, c) = result(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    if (!out.all_finite()) throw NumericalError("pinv produced non-finite entries");
    return out;
}

double spectral_radius(const Matrix& w) {
    if (!w.is_square()) {
        throw ShapeError("spectral_radius needs a square matrix, got " + std::to_string(w.rows()) +
                         "x" + std::to_string(w.cols()));
    }
    if (w.empty()) return 0.0;

    std::size_t count = 0;
    const auto comp = strongly_connected_components(w, count);
    std::vector<std::vector<std::size_t>> members(count);
    for (std::size_t v = 0; v < comp.size(); ++v) members[comp[v]].push_back(v);

    double radius = 0.0;
    for (const auto& block : members) {
        if (block.size() == 1 && w(block[0], block[0]) == 0.0) continue;
        radius = std::max(radius, block_spectral_radius(w, block));
    }
    return radius;
}

Matrix scale_to_spectral_radius(const Matrix& w, double target) {
    if (!(target > 0.0)) throw ParameterError("spectral radius target must be positive");
    const double radius = spectral_radius(w);
    if (radius == 0.0) {
        throw DegenerateMatrixError("cannot rescale a matrix with zero spectral radius");
    }
    return w * (target / radius);
}

}  // namespace esnrae
