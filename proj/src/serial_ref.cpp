#include "hotelrec/serial_ref.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hotelrec/rng.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec::serial {

namespace {

// Gaussian elimination with partial pivoting; independent of the Cholesky
// path used by the parallel kernel.
std::vector<double> gauss_solve(std::vector<double> A, std::vector<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[std::size_t(r) * n + col]) > std::abs(A[std::size_t(pivot) * n + col]))
                pivot = r;
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(A[std::size_t(col) * n + j], A[std::size_t(pivot) * n + j]);
            std::swap(b[std::size_t(col)], b[std::size_t(pivot)]);
        }
        const double diag = A[std::size_t(col) * n + col];
        if (diag == 0.0) continue;  // singular direction; leave as-is
        for (int r = col + 1; r < n; ++r) {
            const double f = A[std::size_t(r) * n + col] / diag;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) A[std::size_t(r) * n + j] -= f * A[std::size_t(col) * n + j];
            b[std::size_t(r)] -= f * b[std::size_t(col)];
        }
    }
    std::vector<double> x(std::size_t(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[std::size_t(r)];
        for (int j = r + 1; j < n; ++j) s -= A[std::size_t(r) * n + j] * x[std::size_t(j)];
        const double diag = A[std::size_t(r) * n + r];
        x[std::size_t(r)] = diag != 0.0 ? s / diag : 0.0;
    }
    return x;
}

}  // namespace

void als_half_sweep(FactorModel& model, const SparseMatrix& r, const SparseMatrix& r_t,
                    Side side) {
    const int k = model.k;
    const SparseMatrix& obs = side == Side::Users ? r : r_t;
    std::vector<double>& target = side == Side::Users ? model.user_factors : model.hotel_factors;
    const std::vector<double>& fixed =
        side == Side::Users ? model.hotel_factors : model.user_factors;

    for (int row = 0; row < obs.rows; ++row) {
        const std::int64_t begin = obs.row_ptr[row];
        const std::int64_t end = obs.row_ptr[row + 1];
        if (begin == end) continue;
        std::vector<double> A(std::size_t(k) * k, 0.0);
        std::vector<double> b(std::size_t(k), 0.0);
        for (std::int64_t p = begin; p < end; ++p) {
            const double* f = fixed.data() + std::size_t(obs.col[p]) * k;
            for (int i = 0; i < k; ++i) {
                b[std::size_t(i)] += obs.val[p] * f[i];
                for (int j = 0; j < k; ++j) A[std::size_t(i) * k + j] += f[i] * f[j];
            }
        }
        for (int i = 0; i < k; ++i) A[std::size_t(i) * k + i] += model.config.lambda;
        const auto x = gauss_solve(std::move(A), std::move(b), k);
        std::copy(x.begin(), x.end(), target.begin() + std::size_t(row) * k);
    }
}

double regularized_loss(const FactorModel& model, const SparseMatrix& r) {
    double loss = 0.0;
    for (int i = 0; i < r.rows; ++i)
        for (std::int64_t p = r.row_ptr[i]; p < r.row_ptr[i + 1]; ++p) {
            const double e = r.val[p] - model.predict(i, r.col[p]);
            loss += e * e;
        }
    double norms = 0.0;
    for (double v : model.user_factors) norms += v * v;
    for (double v : model.hotel_factors) norms += v * v;
    return loss + model.config.lambda * norms;
}

ClusterModel fit_kmeans(const Mat& points, int k, int max_iter, std::uint64_t seed) {
    const int n = points.rows;
    if (k < 1 || k > n) throw DataError("serial kmeans: bad k");

    Rng rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i)
        std::swap(idx[std::size_t(i)], idx[std::size_t(rng.uniform_int(i, n - 1))]);

    ClusterModel model;
    model.dim = points.cols;
    Mat centroids(k, points.cols);
    for (int c = 0; c < k; ++c) {
        const double* src = points.row(idx[std::size_t(c)]);
        std::copy(src, src + points.cols, centroids.row(c));
    }

    model.assignment.assign(std::size_t(n), -1);
    std::vector<double> dist(std::size_t(n), 0.0);
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<int> next(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points.row_span(i), centroids.row_span(0));
            for (int c = 1; c < k; ++c) {
                const double d = squared_distance(points.row_span(i), centroids.row_span(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            next[std::size_t(i)] = best;
            dist[std::size_t(i)] = best_d;
        }
        double obj = 0.0;
        for (double d : dist) obj += d;
        model.objective_trace.push_back(obj);
        model.iterations = iter + 1;
        const bool converged = next == model.assignment;
        model.assignment = std::move(next);
        if (converged) break;

        std::vector<std::int64_t> size(std::size_t(k), 0);
        Mat sum(k, points.cols);
        for (int i = 0; i < n; ++i) {
            const int c = model.assignment[std::size_t(i)];
            ++size[std::size_t(c)];
            for (int j = 0; j < points.cols; ++j) sum.at(c, j) += points.at(i, j);
        }
        std::vector<int> taken;
        for (int c = 0; c < k; ++c) {
            if (size[std::size_t(c)] > 0) {
                for (int j = 0; j < points.cols; ++j)
                    centroids.at(c, j) = sum.at(c, j) / double(size[std::size_t(c)]);
            } else {
                int far = -1;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (std::find(taken.begin(), taken.end(), i) != taken.end()) continue;
                    if (dist[std::size_t(i)] > far_d) {
                        far_d = dist[std::size_t(i)];
                        far = i;
                    }
                }
                taken.push_back(far);
                const double* p = points.row(far);
                std::copy(p, p + points.cols, centroids.row(c));
            }
        }
    }

    std::vector<std::int64_t> size(std::size_t(k), 0);
    Mat sum(k, points.cols);
    for (int i = 0; i < n; ++i) {
        const int c = model.assignment[std::size_t(i)];
        ++size[std::size_t(c)];
        for (int j = 0; j < points.cols; ++j) sum.at(c, j) += points.at(i, j);
    }
    std::vector<int> remap(std::size_t(k), -1);
    int kept = 0;
    for (int c = 0; c < k; ++c)
        if (size[std::size_t(c)] > 0) remap[std::size_t(c)] = kept++;
    model.k = kept;
    model.centroids = Mat(kept, points.cols);
    for (int c = 0; c < k; ++c) {
        if (remap[std::size_t(c)] < 0) continue;
        for (int j = 0; j < points.cols; ++j)
            model.centroids.at(remap[std::size_t(c)], j) = sum.at(c, j) / double(size[std::size_t(c)]);
    }
    for (auto& a : model.assignment) a = remap[std::size_t(a)];
    return model;
}

std::vector<int> nearest_hotels(std::span<const double> profile, const Mat& hotels,
                                const std::unordered_set<int>& exclude, int n) {
    std::vector<std::pair<double, int>> all;
    all.reserve(std::size_t(hotels.rows));
    for (int row = 0; row < hotels.rows; ++row) {
        if (exclude.contains(row)) continue;
        all.emplace_back(squared_distance(profile, hotels.row_span(row)), row);
    }
    std::sort(all.begin(), all.end());
    std::vector<int> out;
    out.reserve(std::min<std::size_t>(all.size(), std::size_t(std::max(n, 0))));
    for (std::size_t i = 0; i < all.size() && int(i) < n; ++i) out.push_back(all[i].second);
    return out;
}

}  // namespace hotelrec::serial
