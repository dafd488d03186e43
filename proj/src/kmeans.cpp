#include "hotelrec/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "hotelrec/csv.hpp"
#include "hotelrec/rng.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

namespace {

// nearest centroid by squared distance, ties to the lowest cluster id
int assign_point(const double* p, const Mat& centroids, double* dist_out) {
    int best = 0;
    double best_d = squared_distance({p, std::size_t(centroids.cols)}, centroids.row_span(0));
    for (int c = 1; c < centroids.rows; ++c) {
        const double d = squared_distance({p, std::size_t(centroids.cols)}, centroids.row_span(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (dist_out) *dist_out = best_d;
    return best;
}

}  // namespace

std::vector<std::vector<int>> ClusterModel::members() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
    for (int i = 0; i < int(assignment.size()); ++i) out[assignment[std::size_t(i)]].push_back(i);
    return out;
}

double kmeans_objective(const Mat& points, const Mat& centroids,
                        const std::vector<int>& assignment) {
    double obj = 0.0;
    for (int i = 0; i < points.rows; ++i)
        obj += squared_distance(points.row_span(i), centroids.row_span(assignment[std::size_t(i)]));
    return obj;
}

ClusterModel fit_kmeans(const Mat& points, int k, int max_iter, std::uint64_t seed) {
    const int n = points.rows;
    if (k < 1) throw ConfigError("kmeans k must be >= 1");
    if (k > n)
        throw DataError("kmeans k=" + std::to_string(k) + " exceeds point count " +
                        std::to_string(n));

    // init: k distinct points sampled uniformly
    Rng rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i)
        std::swap(idx[std::size_t(i)], idx[std::size_t(rng.uniform_int(i, n - 1))]);

    Mat centroids(k, points.cols);
    for (int c = 0; c < k; ++c) {
        const double* src = points.row(idx[std::size_t(c)]);
        std::copy(src, src + points.cols, centroids.row(c));
    }

    ClusterModel model;
    model.dim = points.cols;
    model.assignment.assign(std::size_t(n), -1);
    std::vector<int> next(std::size_t(n), -1);
    std::vector<double> dist(std::size_t(n), 0.0);

    for (int iter = 0; iter < max_iter; ++iter) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            next[std::size_t(i)] = assign_point(points.row(i), centroids, &dist[std::size_t(i)]);

        double obj = 0.0;  // summed serially so the trace is schedule-independent
        for (int i = 0; i < n; ++i) obj += dist[std::size_t(i)];
        model.objective_trace.push_back(obj);
        model.iterations = iter + 1;

        const bool converged = (next == model.assignment);
        model.assignment = next;
        if (converged) break;

        // update: centroid = mean of members
        std::vector<std::int64_t> size(std::size_t(k), 0);
        Mat sum(k, points.cols);
        for (int i = 0; i < n; ++i) {
            const int c = model.assignment[std::size_t(i)];
            ++size[std::size_t(c)];
            const double* p = points.row(i);
            double* s = sum.row(c);
            for (int j = 0; j < points.cols; ++j) s[j] += p[j];
        }
        std::vector<int> taken;  // points used to re-seed empty clusters this round
        for (int c = 0; c < k; ++c) {
            if (size[std::size_t(c)] > 0) {
                const double* s = sum.row(c);
                double* ctr = centroids.row(c);
                for (int j = 0; j < points.cols; ++j) ctr[j] = s[j] / double(size[std::size_t(c)]);
            } else {
                // re-seed at the point farthest from its current centroid
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

    // final centroids as exact member means; drop clusters that ended empty
    std::vector<std::int64_t> size(std::size_t(k), 0);
    Mat sum(k, points.cols);
    for (int i = 0; i < n; ++i) {
        const int c = model.assignment[std::size_t(i)];
        ++size[std::size_t(c)];
        const double* p = points.row(i);
        double* s = sum.row(c);
        for (int j = 0; j < points.cols; ++j) s[j] += p[j];
    }
    std::vector<int> remap(std::size_t(k), -1);
    int kept = 0;
    for (int c = 0; c < k; ++c)
        if (size[std::size_t(c)] > 0) remap[std::size_t(c)] = kept++;
    model.k = kept;
    model.centroids = Mat(kept, points.cols);
    for (int c = 0; c < k; ++c) {
        if (remap[std::size_t(c)] < 0) continue;
        const double* s = sum.row(c);
        double* ctr = model.centroids.row(remap[std::size_t(c)]);
        for (int j = 0; j < points.cols; ++j) ctr[j] = s[j] / double(size[std::size_t(c)]);
    }
    for (auto& a : model.assignment) a = remap[std::size_t(a)];
    return model;
}

void save_kmeans(std::ostream& out, const ClusterModel& model) {
    out << "kmeans," << model.k << ',' << model.dim << ',' << model.assignment.size() << '\n';
    for (int c = 0; c < model.k; ++c) {
        out << "centroid";
        const double* ctr = model.centroids.row(c);
        for (int j = 0; j < model.dim; ++j) out << ',' << csv::format_double(ctr[j]);
        out << '\n';
    }
    out << "assignment";
    for (int a : model.assignment) out << ',' << a;
    out << '\n';
}

ClusterModel load_kmeans(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("kmeans file empty");
    auto head = csv::split_fields(csv::normalize_line(std::move(line), true));
    if (head.size() != 4 || head[0] != "kmeans") throw DataError("bad kmeans file header");
    ClusterModel model;
    model.k = int(*csv::parse_int(head[1]));
    model.dim = int(*csv::parse_int(head[2]));
    const int n = int(*csv::parse_int(head[3]));
    model.centroids = Mat(model.k, model.dim);
    for (int c = 0; c < model.k; ++c) {
        if (!std::getline(in, line)) throw DataError("kmeans file truncated");
        auto f = csv::split_fields(csv::normalize_line(std::move(line), false));
        if (int(f.size()) != model.dim + 1 || f[0] != "centroid")
            throw DataError("bad kmeans centroid row");
        for (int j = 0; j < model.dim; ++j)
            model.centroids.at(c, j) = *csv::parse_double(f[std::size_t(j) + 1]);
    }
    if (!std::getline(in, line)) throw DataError("kmeans file truncated");
    auto f = csv::split_fields(csv::normalize_line(std::move(line), false));
    if (int(f.size()) != n + 1 || f[0] != "assignment") throw DataError("bad kmeans assignment row");
    model.assignment.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) model.assignment[std::size_t(i)] = int(*csv::parse_int(f[std::size_t(i) + 1]));
    return model;
}

}  // namespace hotelrec
