#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spgcl/matrix.hpp"
#include "spgcl/numerics.hpp"
#include "support.hpp"

using namespace spgcl;

namespace {

Matrix reconstruct(const EigenDecomposition& eig) {
    const int n = eig.eigenvectors.rows();
    Matrix scaled = eig.eigenvectors;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) scaled(i, j) *= eig.eigenvalues[j];
    return matmul_transpose_b(scaled, eig.eigenvectors);
}

}  // namespace

TEST_CASE("symmetric eigendecomposition of a 2x2") {
    Matrix m(2, 2);
    m(0, 0) = 2; m(0, 1) = 1;
    m(1, 0) = 1; m(1, 1) = 2;
    const EigenDecomposition eig = symmetric_eig(m);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(3.0));
    const Matrix gram = matmul_transpose_a(eig.eigenvectors, eig.eigenvectors);
    CHECK(frobenius_norm(subtract(gram, Matrix::identity(2))) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("tridiagonal Toeplitz spectrum matches the closed form") {
    const int n = 5;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 2.0;
        if (i + 1 < n) {
            m(i, i + 1) = -1.0;
            m(i + 1, i) = -1.0;
        }
    }
    const EigenDecomposition eig = symmetric_eig(m);
    for (int k = 1; k <= n; ++k) {
        const double expected = 2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1));
        CHECK(eig.eigenvalues[k - 1] == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK(frobenius_norm(subtract(reconstruct(eig), m)) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("eigendecomposition reconstructs random symmetric matrices") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix raw = testsupport::random_matrix(12, 12, rng);
        const Matrix sym = symmetrized(raw);
        const EigenDecomposition eig = symmetric_eig(sym);
        for (std::size_t i = 1; i < eig.eigenvalues.size(); ++i)
            CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i - 1]);
        CHECK(frobenius_norm(subtract(reconstruct(eig), sym)) <= 1e-8 * (1.0 + frobenius_norm(sym)));
    }
}

TEST_CASE("clearly asymmetric input is rejected") {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(symmetric_eig(m), Error);
    CHECK_THROWS_AS(symmetric_eig(Matrix(2, 3)), Error);
}

TEST_CASE("linear solve recovers a known solution") {
    Rng rng(15);
    const int n = 8;
    Matrix a = testsupport::random_matrix(n, n, rng);
    for (int i = 0; i < n; ++i) a(i, i) += n;
    const Matrix x_true = testsupport::random_matrix(n, 2, rng);
    const Matrix b = matmul(a, x_true);
    const Matrix x = linear_solve(a, b);
    CHECK(frobenius_norm(subtract(x, x_true)) <= 1e-9 * frobenius_norm(x_true));
}

TEST_CASE("singular systems are rejected") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 2; a(1, 1) = 4;
    Matrix b(2, 1);
    b(0, 0) = 1;
    CHECK_THROWS_AS(linear_solve(a, b), Error);
}

TEST_CASE("unitary row DFT: delta spectrum, Parseval, and inversion") {
    const int f = 8;
    Matrix x(1, f);
    x(0, 3) = 1.0;
    const ComplexMatrix h = dft_rows(x);
    for (int k = 0; k < f; ++k) {
        const double mag = std::hypot(h.re(0, k), h.im(0, k));
        CHECK(mag == doctest::Approx(1.0 / std::sqrt(double(f))));
    }

    Rng rng(4);
    const Matrix y = testsupport::random_matrix(3, 7, rng);
    const ComplexMatrix hy = dft_rows(y);
    double space = 0.0, freq = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 7; ++j) {
            space += y(i, j) * y(i, j);
            freq += hy.re(i, j) * hy.re(i, j) + hy.im(i, j) * hy.im(i, j);
        }
    CHECK(space == doctest::Approx(freq).epsilon(1e-10));

    const ComplexMatrix round = idft_rows(hy);
    CHECK(frobenius_norm(subtract(round.re, y)) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(max_abs(round.im) <= 1e-10);
}
