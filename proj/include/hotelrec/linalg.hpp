#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hotelrec {

// Dense row-major matrix. Small enough on purpose; the heavy lifting in
// this project is k x k solves and covariance eigendecompositions.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), 0.0) {}

    double* row(int i) { return a.data() + std::size_t(i) * cols; }
    const double* row(int i) const { return a.data() + std::size_t(i) * cols; }
    std::span<const double> row_span(int i) const { return {row(i), std::size_t(cols)}; }
    double& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
    double at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

// In-place Cholesky A = L L^T on a symmetric matrix stored densely (n x n).
// Returns false if A is not positive definite.
bool cholesky_factor(std::vector<double>& A, int n);

// Solves L L^T x = b given the factor from cholesky_factor; b is overwritten.
void cholesky_solve(const std::vector<double>& L, int n, std::vector<double>& b);

struct SymSolveResult {
    bool used_pseudo_inverse = false;
};

// Solves A x = b for symmetric positive semi-definite A. Tries Cholesky
// first; on a singular system falls back to an eigendecomposition-based
// pseudo-inverse (min-norm solution). b is overwritten with x.
SymSolveResult solve_sym(std::vector<double> A, int n, std::vector<double>& b);

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
// Returns eigenvalues in non-increasing order; eigenvectors_out has the
// matching eigenvector in each ROW (n x n row-major).
void jacobi_eigh(const std::vector<double>& A, int n, std::vector<double>& eigenvalues_out,
                 std::vector<double>& eigenvectors_out);

}  // namespace hotelrec
