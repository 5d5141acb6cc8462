#pragma once

#include <vector>

#include "spgcl/matrix.hpp"

namespace spgcl {

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // orthonormal columns, column i pairs with eigenvalue i
};

// Full decomposition of a symmetric matrix via Householder tridiagonalization
// followed by QL iteration with implicit shifts. The input is symmetrized as
// (M + M^T)/2 first; asymmetry beyond 1e-10 (relative to the largest entry)
// is rejected. E_SHAPE on non-square or empty input, E_NUMERIC if the
// iteration fails to converge.
EigenDecomposition symmetric_eig(const Matrix& m);

// Solves a * x = b for dense square a via LU with partial pivoting. Fails
// with E_NUMERIC when a is singular or the 1-norm condition estimate reaches
// 1e12.
Matrix linear_solve(const Matrix& a, const Matrix& b);

struct ComplexMatrix {
    Matrix re, im;

    int rows() const { return re.rows(); }
    int cols() const { return re.cols(); }
};

// Unitary discrete Fourier transform applied to each row (1/sqrt(F) scaling
// both ways, so Parseval holds exactly).
ComplexMatrix dft_rows(const Matrix& x);
ComplexMatrix idft_rows(const ComplexMatrix& h);

}  // namespace spgcl
