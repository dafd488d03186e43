#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hotelrec/kmeans.hpp"
#include "hotelrec/rng.hpp"
#include "hotelrec/serial_ref.hpp"

using namespace hotelrec;

namespace {

Mat points_from(const std::vector<std::vector<double>>& rows) {
    Mat m(int(rows.size()), int(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), m.row(int(i)));
    return m;
}

// Minimal Lloyd loop used as a restart oracle; deliberately re-written here
// rather than calling the library.
double brute_force_kmeans_objective(const Mat& pts, int k, Rng& rng) {
    const int n = pts.rows;
    std::vector<int> centers;
    while (int(centers.size()) < k) {
        const int c = int(rng.uniform_int(0, n - 1));
        if (std::find(centers.begin(), centers.end(), c) == centers.end()) centers.push_back(c);
    }
    Mat centroids(k, pts.cols);
    for (int c = 0; c < k; ++c)
        std::copy(pts.row(centers[std::size_t(c)]), pts.row(centers[std::size_t(c)]) + pts.cols,
                  centroids.row(c));
    std::vector<int> assign(std::size_t(n), 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = squared_distance(pts.row_span(i), centroids.row_span(0));
            for (int c = 1; c < k; ++c) {
                const double d = squared_distance(pts.row_span(i), centroids.row_span(c));
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (assign[std::size_t(i)] != best) changed = true;
            assign[std::size_t(i)] = best;
        }
        if (!changed && iter > 0) break;
        for (int c = 0; c < k; ++c) {
            double cnt = 0.0;
            std::vector<double> sum(std::size_t(pts.cols), 0.0);
            for (int i = 0; i < n; ++i)
                if (assign[std::size_t(i)] == c) {
                    cnt += 1.0;
                    for (int j = 0; j < pts.cols; ++j) sum[std::size_t(j)] += pts.at(i, j);
                }
            if (cnt > 0)
                for (int j = 0; j < pts.cols; ++j) centroids.at(c, j) = sum[std::size_t(j)] / cnt;
        }
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i)
        obj += squared_distance(pts.row_span(i), centroids.row_span(assign[std::size_t(i)]));
    return obj;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("two separated pairs produce their midpoints as centroids") {
    const Mat pts = points_from({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
    auto model = fit_kmeans(pts, 2, 50, 1);
    REQUIRE(model.k == 2);
    std::vector<std::vector<double>> got = {
        {model.centroids.at(0, 0), model.centroids.at(0, 1)},
        {model.centroids.at(1, 0), model.centroids.at(1, 1)},
    };
    std::sort(got.begin(), got.end());
    CHECK(got[0][0] == doctest::Approx(0.0));
    CHECK(got[0][1] == doctest::Approx(0.5));
    CHECK(got[1][0] == doctest::Approx(10.0));
    CHECK(got[1][1] == doctest::Approx(10.5));
    CHECK(model.assignment[0] == model.assignment[1]);
    CHECK(model.assignment[2] == model.assignment[3]);
    CHECK(model.assignment[0] != model.assignment[2]);
}

TEST_CASE("k=1 returns the global mean") {
    const Mat pts = points_from({{1, 2}, {3, 4}, {5, 12}});
    auto model = fit_kmeans(pts, 1, 10, 7);
    REQUIRE(model.k == 1);
    CHECK(model.centroids.at(0, 0) == doctest::Approx(3.0));
    CHECK(model.centroids.at(0, 1) == doctest::Approx(6.0));
}

TEST_CASE("objective never increases across iterations") {
    Rng rng(55);
    Mat pts(60, 3);
    for (double& v : pts.a) v = rng.uniform(0.0, 10.0);
    auto model = fit_kmeans(pts, 5, 100, 3);
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
        CHECK(model.objective_trace[i] <= model.objective_trace[i - 1] + 1e-9);
}

TEST_CASE("result beats the worst of 100 random-restart brute-force runs") {
    Rng rng(1001);
    Mat pts(30, 2);
    for (double& v : pts.a) v = rng.uniform(0.0, 20.0);
    auto model = fit_kmeans(pts, 3, 100, 42);
    const double ours = model.objective_trace.back();

    Rng restart_rng(2002);
    double worst = 0.0;
    for (int r = 0; r < 100; ++r)
        worst = std::max(worst, brute_force_kmeans_objective(pts, 3, restart_rng));
    CHECK(ours <= worst + 1e-9);
}

TEST_CASE("k larger than the point count is fatal") {
    const Mat pts = points_from({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(fit_kmeans(pts, 3, 10, 1), DataError);
}

TEST_CASE("same seed reproduces the model exactly") {
    Rng rng(66);
    Mat pts(40, 4);
    for (double& v : pts.a) v = rng.uniform();
    auto a = fit_kmeans(pts, 4, 50, 9);
    auto b = fit_kmeans(pts, 4, 50, 9);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids.a == b.centroids.a);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("every centroid is the mean of its members") {
    Rng rng(77);
    Mat pts(50, 3);
    for (double& v : pts.a) v = rng.uniform(0.0, 5.0);
    auto model = fit_kmeans(pts, 6, 100, 11);
    const auto members = model.members();
    for (int c = 0; c < model.k; ++c) {
        REQUIRE(!members[std::size_t(c)].empty());
        for (int j = 0; j < model.dim; ++j) {
            double mean = 0.0;
            for (int i : members[std::size_t(c)]) mean += pts.at(i, j);
            mean /= double(members[std::size_t(c)].size());
            CHECK(model.centroids.at(c, j) == doctest::Approx(mean).epsilon(1e-12));
        }
    }
}

TEST_CASE("openmp and serial reference agree bit for bit") {
    Rng rng(88);
    Mat pts(120, 5);
    for (double& v : pts.a) v = rng.uniform(0.0, 30.0);
    auto parallel = fit_kmeans(pts, 7, 60, 17);
    auto reference = serial::fit_kmeans(pts, 7, 60, 17);
    CHECK(parallel.assignment == reference.assignment);
    CHECK(parallel.centroids.a == reference.centroids.a);
    CHECK(parallel.objective_trace == reference.objective_trace);
}

TEST_CASE("model round-trips through csv") {
    Rng rng(91);
    Mat pts(25, 2);
    for (double& v : pts.a) v = rng.uniform(0.0, 9.0);
    auto model = fit_kmeans(pts, 3, 40, 5);
    std::stringstream buf;
    save_kmeans(buf, model);
    auto loaded = load_kmeans(buf);
    CHECK(loaded.k == model.k);
    CHECK(loaded.assignment == model.assignment);
    CHECK(loaded.centroids.a == model.centroids.a);
}

}  // TEST_SUITE
