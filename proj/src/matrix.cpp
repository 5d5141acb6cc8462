#include "spgcl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spgcl {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(kErrShape, std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + " differ");
}

}  // namespace

Matrix::Matrix(int rows, int cols, double fill) {
    if (rows < 0 || cols < 0) fail(kErrShape, "matrix dimensions must be non-negative");
    rows_ = rows;
    cols_ = cols;
    data_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        fail(kErrShape, "matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()) + " differ");
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (int j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        fail(kErrShape, "matmul_transpose_a: row counts " + std::to_string(a.rows()) + " and " +
                            std::to_string(b.rows()) + " differ");
    Matrix out(a.cols(), b.cols());
    for (int k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = out.row(i);
            for (int j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

Matrix matmul_transpose_b(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        fail(kErrShape, "matmul_transpose_b: column counts " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.cols()) + " differ");
    Matrix out(a.rows(), b.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (int j = 0; j < b.rows(); ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out = a;
    add_in_place(out, b);
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix out = a;
    add_in_place(out, b, -1.0);
    return out;
}

void add_in_place(Matrix& a, const Matrix& b, double scale) {
    require_same_shape(a, b, "add_in_place");
    double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) pa[i] += scale * pb[i];
}

void scale_in_place(Matrix& a, double factor) {
    double* pa = a.data();
    for (std::size_t i = 0; i < a.size(); ++i) pa[i] *= factor;
}

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    const double* pa = a.data();
    for (std::size_t i = 0; i < a.size(); ++i) acc += pa[i] * pa[i];
    return std::sqrt(acc);
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    const double* pa = a.data();
    for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::fabs(pa[i]));
    return best;
}

double row_dot(const Matrix& a, int i, const Matrix& b, int j) {
    if (a.cols() != b.cols()) fail(kErrShape, "row_dot: column counts differ");
    const double* ra = a.row(i);
    const double* rb = b.row(j);
    double acc = 0.0;
    for (int k = 0; k < a.cols(); ++k) acc += ra[k] * rb[k];
    return acc;
}

double row_norm(const Matrix& a, int i) { return std::sqrt(row_dot(a, i, a, i)); }

bool all_finite(const Matrix& a) {
    const double* pa = a.data();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(pa[i])) return false;
    return true;
}

double max_asymmetry(const Matrix& a) {
    if (a.rows() != a.cols()) fail(kErrShape, "max_asymmetry: matrix must be square");
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j)
            worst = std::max(worst, std::fabs(a(i, j) - a(j, i)));
    return worst;
}

Matrix symmetrized(const Matrix& a) {
    if (a.rows() != a.cols()) fail(kErrShape, "symmetrized: matrix must be square");
    Matrix out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
    return out;
}

}  // namespace spgcl
