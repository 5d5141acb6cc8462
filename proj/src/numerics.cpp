#include "spgcl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "spgcl/errors.hpp"

namespace spgcl {

namespace {

// Householder reduction of a symmetric matrix (held in v) to tridiagonal
// form; d receives the diagonal, e the subdiagonal (e[0] unused), and v the
// accumulated orthogonal transformation.
void tridiagonalize(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = v.rows();
    for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::fabs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = (f > 0.0) ? -std::sqrt(h) : std::sqrt(h);
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;

            for (int j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder transformations.
    for (int i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// QL iteration with implicit shifts on the tridiagonal (d, e), rotations
// accumulated into the columns of v.
void ql_iterate(Matrix& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = v.rows();
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::pow(2.0, -52.0);
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
        int m = l;
        while (m < n) {
            if (std::fabs(e[m]) <= eps * tst1) break;
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 64)
                    fail(kErrNumeric, "eigensolver failed to converge at index " +
                                          std::to_string(l));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (int k = 0; k < n; ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::fabs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

struct LuFactors {
    Matrix lu;
    std::vector<int> perm;  // row i of the factorized matrix came from perm[i]
};

LuFactors lu_factorize(const Matrix& a) {
    const int n = a.rows();
    LuFactors fac{a, std::vector<int>(n)};
    std::iota(fac.perm.begin(), fac.perm.end(), 0);
    Matrix& lu = fac.lu;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::fabs(lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::fabs(lu(i, k));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best == 0.0) fail(kErrNumeric, "singular matrix in linear solve");
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
            std::swap(fac.perm[k], fac.perm[pivot]);
        }
        const double inv = 1.0 / lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            lu(i, k) *= inv;
            const double lik = lu(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu(i, j) -= lik * lu(k, j);
        }
    }
    return fac;
}

std::vector<double> lu_solve_vec(const LuFactors& fac, const std::vector<double>& b) {
    const int n = fac.lu.rows();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[fac.perm[i]];
    for (int i = 1; i < n; ++i) {
        double acc = x[i];
        for (int j = 0; j < i; ++j) acc -= fac.lu(i, j) * x[j];
        x[i] = acc;
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = x[i];
        for (int j = i + 1; j < n; ++j) acc -= fac.lu(i, j) * x[j];
        x[i] = acc / fac.lu(i, i);
    }
    return x;
}

// Solves a^T x = b using the same factorization (U^T then L^T, then the
// permutation undone).
std::vector<double> lu_solve_transposed_vec(const LuFactors& fac, const std::vector<double>& b) {
    const int n = fac.lu.rows();
    std::vector<double> y = b;
    for (int i = 0; i < n; ++i) {
        double acc = y[i];
        for (int j = 0; j < i; ++j) acc -= fac.lu(j, i) * y[j];
        y[i] = acc / fac.lu(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = y[i];
        for (int j = i + 1; j < n; ++j) acc -= fac.lu(j, i) * y[j];
        y[i] = acc;
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[fac.perm[i]] = y[i];
    return x;
}

double one_norm(const Matrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double col = 0.0;
        for (int i = 0; i < a.rows(); ++i) col += std::fabs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

// Hager's estimator of ||a^-1||_1 built on the LU factors.
double inverse_one_norm_estimate(const LuFactors& fac) {
    const int n = fac.lu.rows();
    std::vector<double> x(n, 1.0 / n);
    double estimate = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const std::vector<double> y = lu_solve_vec(fac, x);
        estimate = 0.0;
        for (double v : y) estimate += std::fabs(v);
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
        const std::vector<double> z = lu_solve_transposed_vec(fac, xi);
        int best_j = 0;
        double best_val = 0.0;
        double zx = 0.0;
        for (int i = 0; i < n; ++i) {
            zx += z[i] * x[i];
            if (std::fabs(z[i]) > best_val) {
                best_val = std::fabs(z[i]);
                best_j = i;
            }
        }
        if (best_val <= zx) break;
        std::fill(x.begin(), x.end(), 0.0);
        x[best_j] = 1.0;
    }
    return estimate;
}

}  // namespace

EigenDecomposition symmetric_eig(const Matrix& m) {
    if (m.rows() == 0) fail(kErrShape, "symmetric_eig: empty matrix");
    if (m.rows() != m.cols()) fail(kErrShape, "symmetric_eig: matrix must be square");
    const double scale = std::max(1.0, max_abs(m));
    if (max_asymmetry(m) > 1e-10 * scale)
        fail(kErrDomain, "symmetric_eig: matrix is not symmetric");

    const int n = m.rows();
    EigenDecomposition dec;
    dec.eigenvalues.assign(n, 0.0);
    dec.eigenvectors = symmetrized(m);
    std::vector<double> e(n, 0.0);
    if (n == 1) {
        dec.eigenvalues[0] = dec.eigenvectors(0, 0);
        dec.eigenvectors(0, 0) = 1.0;
        return dec;
    }
    tridiagonalize(dec.eigenvectors, dec.eigenvalues, e);
    ql_iterate(dec.eigenvectors, dec.eigenvalues, e);

    // Sort ascending, permuting eigenvector columns along.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dec.eigenvalues[a] < dec.eigenvalues[b]; });
    std::vector<double> sorted_vals(n);
    Matrix sorted_vecs(n, n);
    for (int j = 0; j < n; ++j) {
        sorted_vals[j] = dec.eigenvalues[order[j]];
        for (int i = 0; i < n; ++i) sorted_vecs(i, j) = dec.eigenvectors(i, order[j]);
    }
    dec.eigenvalues = std::move(sorted_vals);
    dec.eigenvectors = std::move(sorted_vecs);
    return dec;
}

Matrix linear_solve(const Matrix& a, const Matrix& b) {
    if (a.rows() == 0) fail(kErrShape, "linear_solve: empty matrix");
    if (a.rows() != a.cols()) fail(kErrShape, "linear_solve: matrix must be square");
    if (b.rows() != a.rows())
        fail(kErrShape, "linear_solve: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                            std::to_string(a.rows()));
    const LuFactors fac = lu_factorize(a);
    const double cond = one_norm(a) * inverse_one_norm_estimate(fac);
    if (!(cond < 1e12))
        fail(kErrNumeric, "ill-conditioned matrix in linear solve (cond ~ " +
                              std::to_string(cond) + ")");

    const int n = a.rows();
    Matrix x(n, b.cols());
    std::vector<double> column(n);
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < n; ++i) column[i] = b(i, j);
        const std::vector<double> sol = lu_solve_vec(fac, column);
        for (int i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

ComplexMatrix dft_rows(const Matrix& x) {
    const int n = x.rows();
    const int f = x.cols();
    if (f == 0) fail(kErrShape, "dft_rows: empty rows");
    ComplexMatrix h{Matrix(n, f), Matrix(n, f)};
    const double norm = 1.0 / std::sqrt(static_cast<double>(f));
    const double two_pi = 2.0 * 3.14159265358979323846;
    // One table of the f-th roots of unity; jk enters modulo f.
    std::vector<double> cos_table(f), sin_table(f);
    for (int t = 0; t < f; ++t) {
        cos_table[t] = std::cos(two_pi * t / f);
        sin_table[t] = std::sin(two_pi * t / f);
    }
    for (int i = 0; i < n; ++i) {
        const double* xrow = x.row(i);
        for (int k = 0; k < f; ++k) {
            double re = 0.0;
            double im = 0.0;
            for (int j = 0; j < f; ++j) {
                const int t = static_cast<int>((static_cast<long long>(j) * k) % f);
                re += xrow[j] * cos_table[t];
                im -= xrow[j] * sin_table[t];
            }
            h.re(i, k) = norm * re;
            h.im(i, k) = norm * im;
        }
    }
    return h;
}

ComplexMatrix idft_rows(const ComplexMatrix& h) {
    if (h.re.rows() != h.im.rows() || h.re.cols() != h.im.cols())
        fail(kErrShape, "idft_rows: real and imaginary parts differ in shape");
    const int n = h.rows();
    const int f = h.cols();
    if (f == 0) fail(kErrShape, "idft_rows: empty rows");
    ComplexMatrix x{Matrix(n, f), Matrix(n, f)};
    const double norm = 1.0 / std::sqrt(static_cast<double>(f));
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<double> cos_table(f), sin_table(f);
    for (int t = 0; t < f; ++t) {
        cos_table[t] = std::cos(two_pi * t / f);
        sin_table[t] = std::sin(two_pi * t / f);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < f; ++j) {
            double re = 0.0;
            double im = 0.0;
            for (int k = 0; k < f; ++k) {
                const int t = static_cast<int>((static_cast<long long>(j) * k) % f);
                const double c = cos_table[t];
                const double s = sin_table[t];
                re += h.re(i, k) * c - h.im(i, k) * s;
                im += h.re(i, k) * s + h.im(i, k) * c;
            }
            x.re(i, j) = norm * re;
            x.im(i, j) = norm * im;
        }
    }
    return x;
}

}  // namespace spgcl
