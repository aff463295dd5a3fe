#pragma once

// Helpers shared by the unit tests: Eigen views used as independent oracles
// and small random fixtures.

#include "esnrae/dataio.hpp"
#include "esnrae/matrix.hpp"
#include "esnrae/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace esnrae::test {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    }
    return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    }
    return m;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                            double low = -1.0, double high = 1.0) {
    SeededRng rng(seed, "test/matrix");
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform(low, high);
    return m;
}

/// Two-class dataset with `p` patterns of length `k`, labels alternating.
inline Dataset random_dataset(std::size_t p, std::size_t k, std::uint64_t seed,
                              Split split = Split::train) {
    Dataset d;
    d.name = "random";
    d.split = split;
    d.patterns = random_matrix(p, k, seed);
    d.label_map = {1, 2};
    for (std::size_t i = 0; i < p; ++i) d.labels.push_back(static_cast<int>(i % 2));
    return d;
}

}  // namespace esnrae::test
