#include "esnrae/error.hpp"
#include "esnrae/numerics.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace esnrae;
using test::random_matrix;
using test::to_eigen;

namespace {

double oracle_radius(const Matrix& w) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(to_eigen(w));
    REQUIRE(es.info() == Eigen::Success);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double rel(const Eigen::MatrixXd& residual, const Eigen::MatrixXd& ref) {
    const double scale = ref.norm();
    return residual.norm() / (scale > 0.0 ? scale : 1.0);
}

}  // namespace

TEST_CASE("sparse_random_matrix has the exact nonzero count") {
    SUBCASE("full density") {
        SeededRng rng(7, "w");
        const Matrix m = sparse_random_matrix(3, 3, 1.0, -1.0, 1.0, rng);
        CHECK(m.count_nonzero() == 9);
        for (double v : m.data()) CHECK((v >= -1.0 && v <= 1.0));
    }
    SUBCASE("ECG200 reservoir") {
        SeededRng rng(1, "w");
        CHECK(sparse_random_matrix(150, 150, 0.1, -1.0, 1.0, rng).count_nonzero() == 2250);
    }
    SUBCASE("brute-force count") {
        SeededRng rng(3, "w");
        const Matrix m = sparse_random_matrix(50, 50, 0.05, -1.0, 1.0, rng);
        std::size_t count = 0;
        for (std::size_t i = 0; i < 50; ++i) {
            for (std::size_t j = 0; j < 50; ++j) count += m(i, j) != 0.0 ? 1 : 0;
        }
        CHECK(count == 125);
    }
    SUBCASE("Earthquakes reservoir") {
        SeededRng rng(1, "w");
        CHECK(sparse_random_matrix(600, 600, 0.002, -1.0, 1.0, rng).count_nonzero() == 720);
    }
}

TEST_CASE("sparse_random_matrix rejects bad parameters") {
    SeededRng rng(1, "w");
    CHECK_THROWS_AS((void)sparse_random_matrix(4, 4, 0.0, -1.0, 1.0, rng), ParameterError);
    CHECK_THROWS_AS((void)sparse_random_matrix(4, 4, 1.5, -1.0, 1.0, rng), ParameterError);
    CHECK_THROWS_AS((void)sparse_random_matrix(4, 4, 0.5, 1.0, -1.0, rng), ParameterError);
}

TEST_CASE("random matrices are deterministic per (seed, stream)") {
    SeededRng a(42, "w1"), b(42, "w1"), c(42, "w2");
    const Matrix ma = sparse_random_matrix(30, 30, 0.2, -1.0, 1.0, a);
    const Matrix mb = sparse_random_matrix(30, 30, 0.2, -1.0, 1.0, b);
    const Matrix mc = sparse_random_matrix(30, 30, 0.2, -1.0, 1.0, c);
    CHECK(ma == mb);
    CHECK_FALSE(ma == mc);
}

TEST_CASE("pinv closed forms") {
    CHECK(max_abs_diff(pinv(Matrix::identity(4)), Matrix::identity(4)) < 1e-15);
    const Matrix d{{2.0, 0.0}, {0.0, 0.0}};
    const Matrix expect{{0.5, 0.0}, {0.0, 0.0}};
    CHECK(max_abs_diff(pinv(d), expect) < 1e-15);
    const Matrix zero(3, 2);
    CHECK(pinv(zero) == Matrix(2, 3));
}

TEST_CASE("pinv satisfies the Penrose conditions on 100 random matrices") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        SeededRng dims(s, "dims");
        const std::size_t m = 1 + dims.uniform_index(20);
        const std::size_t n = 1 + dims.uniform_index(20);
        Matrix a = random_matrix(m, n, s);
        if (s % 4 == 0 && m > 1) {
            // rank-deficient: duplicate the first row
            for (std::size_t j = 0; j < n; ++j) a(m - 1, j) = a(0, j);
        }
        const Eigen::MatrixXd A = to_eigen(a);
        const Eigen::MatrixXd P = to_eigen(pinv(a));
        CAPTURE(m);
        CAPTURE(n);
        CHECK(rel(A * P * A - A, A) < 1e-8);
        CHECK(rel(P * A * P - P, P) < 1e-8);
        CHECK(rel((A * P).transpose() - A * P, A * P) < 1e-8);
        CHECK(rel((P * A).transpose() - P * A, P * A) < 1e-8);
    }
}

TEST_CASE("pinv of a full-rank tall matrix reproduces it") {
    const Matrix a = random_matrix(10, 6, 99);
    const Eigen::MatrixXd A = to_eigen(a);
    CHECK(rel(A * to_eigen(pinv(a)) * A - A, A) < 1e-10);
}

TEST_CASE("pinv tolerance zeroes small singular values") {
    const Matrix d{{1.0, 0.0}, {0.0, 1e-6}};
    CHECK(pinv(d)(1, 1) == doctest::Approx(1e6));
    CHECK(pinv(d, 1e-3)(1, 1) == 0.0);
}

TEST_CASE("spectral radius closed forms") {
    const double diag[] = {0.3, -0.9};
    CHECK(spectral_radius(Matrix::diagonal(diag)) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(spectral_radius(Matrix(5, 5)) == 0.0);
    // rotation: complex pair of modulus 2
    const Matrix rot{{0.0, -2.0}, {2.0, 0.0}};
    CHECK(spectral_radius(rot) == doctest::Approx(2.0).epsilon(1e-12));
    // strictly upper triangular: nilpotent
    const Matrix nil{{0.0, 1.0, 5.0}, {0.0, 0.0, 2.0}, {0.0, 0.0, 0.0}};
    CHECK(spectral_radius(nil) == 0.0);
    CHECK_THROWS_AS((void)spectral_radius(Matrix(2, 3)), ShapeError);
}

TEST_CASE("spectral radius matches a dense eigensolver on sparse matrices") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        SeededRng rng(s, "w");
        const double density = 0.02 + 0.1 * static_cast<double>(s % 5);
        const Matrix w = sparse_random_matrix(20 + s % 30, 20 + s % 30, density, -1.0, 1.0, rng);
        const double got = spectral_radius(w);
        if (got == 0.0) {
            // A dense solver smears a defective zero eigenvalue to ~eps^(1/k);
            // nilpotency is checked exactly instead: W^n = 0.
            Eigen::MatrixXd p = Eigen::MatrixXd::Identity(w.rows(), w.cols());
            for (std::size_t i = 0; i < w.rows(); ++i) p = p * to_eigen(w);
            CHECK(p.isZero(0.0));
        } else {
            const double expect = oracle_radius(w);
            CHECK(std::abs(got - expect) <= 1e-6 * std::max(1.0, expect));
        }
    }
}

TEST_CASE("scale_to_spectral_radius") {
    const double d[] = {2.0, 1.0};
    const Matrix scaled = scale_to_spectral_radius(Matrix::diagonal(d), 0.9);
    CHECK(scaled(0, 0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(scaled(1, 1) == doctest::Approx(0.45).epsilon(1e-12));

    const double half[] = {0.5, -0.25, 0.1};
    const Matrix w = Matrix::diagonal(half);
    CHECK(max_abs_diff(scale_to_spectral_radius(w, 0.5), w) < 1e-12);

    CHECK_THROWS_AS((void)scale_to_spectral_radius(Matrix(4, 4), 0.9), DegenerateMatrixError);
}

TEST_CASE("scaling round-trips on 100 sparse matrices") {
    int checked = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        SeededRng rng(s, "w");
        const Matrix w = sparse_random_matrix(30, 30, 0.1, -1.0, 1.0, rng);
        if (spectral_radius(w) == 0.0) continue;
        const Matrix scaled = scale_to_spectral_radius(w, 0.9);
        CHECK(std::abs(oracle_radius(scaled) - 0.9) < 1e-6);
        ++checked;
    }
    CHECK(checked >= 95);
}

TEST_CASE("ECG200-size reservoir scales to 0.9") {
    SeededRng rng(1, "w");
    const Matrix w = scale_to_spectral_radius(sparse_random_matrix(150, 150, 0.1, -1.0, 1.0, rng), 0.9);
    CHECK(std::abs(oracle_radius(w) - 0.9) < 1e-6);
}

TEST_CASE("rng conversions") {
    SeededRng rng(5, "test");
    double sum = 0.0, sq = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE((u >= 0.0 && u < 1.0));
    }
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
    for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_index(7) < 7);
    CHECK(rng.substream("a").stream() == "test/a");
}
