#include "hotelrec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hotelrec {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

bool cholesky_factor(std::vector<double>& A, int n) {
    // relative pivot floor so rank-deficient systems fail over to the
    // pseudo-inverse path instead of dividing by noise
    double max_diag = 0.0;
    for (int j = 0; j < n; ++j) max_diag = std::max(max_diag, std::abs(A[std::size_t(j) * n + j]));
    const double floor = std::max(max_diag, 1.0) * 1e-12;
    for (int j = 0; j < n; ++j) {
        double d = A[std::size_t(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double l = A[std::size_t(j) * n + k];
            d -= l * l;
        }
        if (!(d > floor)) return false;
        const double dj = std::sqrt(d);
        A[std::size_t(j) * n + j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double s = A[std::size_t(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= A[std::size_t(i) * n + k] * A[std::size_t(j) * n + k];
            A[std::size_t(i) * n + j] = s / dj;
        }
    }
    return true;
}

void cholesky_solve(const std::vector<double>& L, int n, std::vector<double>& b) {
    // forward: L y = b
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= L[std::size_t(i) * n + k] * b[k];
        b[i] = s / L[std::size_t(i) * n + i];
    }
    // backward: L^T x = y
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= L[std::size_t(k) * n + i] * b[k];
        b[i] = s / L[std::size_t(i) * n + i];
    }
}

SymSolveResult solve_sym(std::vector<double> A, int n, std::vector<double>& b) {
    std::vector<double> factor = A;
    if (cholesky_factor(factor, n)) {
        cholesky_solve(factor, n, b);
        return {};
    }
    // Min-norm solution via eigendecomposition, dropping near-null directions.
    std::vector<double> evals, evecs;
    jacobi_eigh(A, n, evals, evecs);
    double max_abs = 0.0;
    for (double v : evals) max_abs = std::max(max_abs, std::abs(v));
    const double cutoff = max_abs * 1e-12;
    std::vector<double> x(std::size_t(n), 0.0);
    for (int j = 0; j < n; ++j) {
        if (std::abs(evals[j]) <= cutoff) continue;
        const double* v = evecs.data() + std::size_t(j) * n;
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += v[i] * b[i];
        c /= evals[j];
        for (int i = 0; i < n; ++i) x[i] += c * v[i];
    }
    b = std::move(x);
    return {.used_pseudo_inverse = true};
}

void jacobi_eigh(const std::vector<double>& A, int n, std::vector<double>& eigenvalues_out,
                 std::vector<double>& eigenvectors_out) {
    std::vector<double> a = A;
    std::vector<double> v(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[std::size_t(i) * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double x = a[std::size_t(i) * n + j];
                s += 2.0 * x * x;
            }
        return std::sqrt(s);
    };

    double frob = 0.0;
    for (double x : a) frob += x * x;
    frob = std::sqrt(frob);
    const double tol = (frob > 0.0 ? frob : 1.0) * 1e-14;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[std::size_t(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[std::size_t(p) * n + p];
                const double aqq = a[std::size_t(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[std::size_t(i) * n + p];
                    const double aiq = a[std::size_t(i) * n + q];
                    a[std::size_t(i) * n + p] = c * aip - s * aiq;
                    a[std::size_t(i) * n + q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[std::size_t(p) * n + i];
                    const double aqi = a[std::size_t(q) * n + i];
                    a[std::size_t(p) * n + i] = c * api - s * aqi;
                    a[std::size_t(q) * n + i] = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[std::size_t(i) * n + p];
                    const double viq = v[std::size_t(i) * n + q];
                    v[std::size_t(i) * n + p] = c * vip - s * viq;
                    v[std::size_t(i) * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a[std::size_t(x) * n + x] > a[std::size_t(y) * n + y];
    });

    eigenvalues_out.resize(std::size_t(n));
    eigenvectors_out.assign(std::size_t(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        eigenvalues_out[j] = a[std::size_t(src) * n + src];
        for (int i = 0; i < n; ++i)
            eigenvectors_out[std::size_t(j) * n + i] = v[std::size_t(i) * n + src];
    }
}

}  // namespace hotelrec
