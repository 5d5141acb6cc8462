#pragma once

#include <vector>

#include "spgcl/errors.hpp"

namespace spgcl {

// Dense row-major matrix of doubles. Sized for desk-scale problems; all
// heavier structure (graphs) stays sparse and is applied through dedicated
// aggregation routines.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
    const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);              // a * b
Matrix matmul_transpose_a(const Matrix& a, const Matrix& b);  // a^T * b
Matrix matmul_transpose_b(const Matrix& a, const Matrix& b);  // a * b^T
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
void add_in_place(Matrix& a, const Matrix& b, double scale = 1.0);
void scale_in_place(Matrix& a, double factor);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double row_dot(const Matrix& a, int i, const Matrix& b, int j);
inline double row_dot(const Matrix& a, int i, int j) { return row_dot(a, i, a, j); }
double row_norm(const Matrix& a, int i);
bool all_finite(const Matrix& a);

// Largest |a_ij - a_ji|; 0 for the empty matrix. E_SHAPE if not square.
double max_asymmetry(const Matrix& a);
// (a + a^T) / 2. E_SHAPE if not square.
Matrix symmetrized(const Matrix& a);

}  // namespace spgcl
