#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace esnrae {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// Every weight family, state collection and feature matrix in the library is
/// a Matrix. A default-constructed Matrix is empty (0×0) and is used to mean
/// "not allocated", e.g. the recurrent matrices of a feed-forward encoder.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] Vector col(std::size_t c) const;
    void set_col(std::size_t c, std::span<const double> values);

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] std::size_t count_nonzero() const noexcept;
    [[nodiscard]] bool all_finite() const noexcept;

    Matrix& operator*=(double s) noexcept;
    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] Matrix operator*(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix operator*(Matrix a, double s);
[[nodiscard]] Matrix operator+(Matrix a, const Matrix& b);
[[nodiscard]] Matrix operator-(Matrix a, const Matrix& b);

/// y = A·x
[[nodiscard]] Vector multiply(const Matrix& a, std::span<const double> x);

[[nodiscard]] double frobenius_norm(const Matrix& m);
[[nodiscard]] double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace esnrae
