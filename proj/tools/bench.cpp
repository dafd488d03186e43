// Wall-time comparison of the OpenMP kernels against the serial reference,
// plus full-scan vs cluster-pruned content retrieval.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_set>

#include "hotelrec/als.hpp"
#include "hotelrec/content.hpp"
#include "hotelrec/kmeans.hpp"
#include "hotelrec/rng.hpp"
#include "hotelrec/serial_ref.hpp"
#include "hotelrec/sparse.hpp"

using namespace hotelrec;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct Row {
    const char* kernel;
    double serial_ms;
    double parallel_ms;
};

void print_row(const Row& r) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f\n", r.kernel, r.serial_ms, r.parallel_ms,
                r.serial_ms / (r.parallel_ms > 0 ? r.parallel_ms : 1e-9));
}

SparseMatrix random_interactions(int m, int u, int per_row, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Triplet> t;
    t.reserve(std::size_t(m) * per_row);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < per_row; ++j)
            t.push_back({i, int(rng.uniform_int(0, u - 1)), double(rng.uniform_int(1, 5))});
    return sparse_from_triplets(m, u, std::move(t));
}

Mat random_points(int n, int dim, std::uint64_t seed) {
    Rng rng(seed);
    Mat pts(n, dim);
    for (double& v : pts.a) v = rng.uniform(0.0, 100.0);
    return pts;
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    const int scale = quick ? 1 : 4;

    std::printf("%-28s %13s %13s   %s\n", "kernel", "serial ref", "omp kernel", "speedup");

    {
        const int m = 1500 * scale, u = 300 * scale, per_row = 12;
        AlsConfig cfg;
        cfg.latent_dim = 20;
        cfg.seed = 7;
        const SparseMatrix r = random_interactions(m, u, per_row, 11);
        const SparseMatrix rt = r.transposed();

        FactorModel a = init_factors(m, u, cfg);
        FactorModel b = a;
        double t0 = now_ms();
        serial::als_half_sweep(a, r, rt, Side::Users);
        serial::als_half_sweep(a, r, rt, Side::Hotels);
        const double serial_ms = now_ms() - t0;
        t0 = now_ms();
        als_half_sweep(b, r, rt, Side::Users);
        als_half_sweep(b, r, rt, Side::Hotels);
        const double parallel_ms = now_ms() - t0;
        print_row({"als full sweep", serial_ms, parallel_ms});

        double max_diff = 0.0;
        for (std::size_t i = 0; i < a.user_factors.size(); ++i)
            max_diff = std::max(max_diff, std::abs(a.user_factors[i] - b.user_factors[i]));
        std::printf("  (max user-factor deviation serial vs openmp: %.3e)\n", max_diff);
    }

    {
        const int n = 8000 * scale, dim = 11, k = 50;
        const Mat pts = random_points(n, dim, 13);
        double t0 = now_ms();
        const auto a = serial::fit_kmeans(pts, k, 15, 99);
        const double serial_ms = now_ms() - t0;
        t0 = now_ms();
        const auto b = fit_kmeans(pts, k, 15, 99);
        const double parallel_ms = now_ms() - t0;
        print_row({"kmeans (15 iterations)", serial_ms, parallel_ms});
        std::printf("  (objective serial %.6g vs openmp %.6g)\n", a.objective_trace.back(),
                    b.objective_trace.back());
    }

    {
        const int hotels = 4000 * scale, profiles = 500 * scale, dim = 11;
        const Mat pts = random_points(hotels, dim, 17);
        const Mat queries = random_points(profiles, dim, 19);
        const auto clusters = fit_kmeans(pts, 50, 15, 23);
        const auto members = clusters.members();
        const std::unordered_set<int> no_exclude;

        double t0 = now_ms();
        for (int q = 0; q < profiles; ++q)
            serial::nearest_hotels(queries.row_span(q), pts, no_exclude, 10);
        const double serial_ms = now_ms() - t0;

        std::vector<std::string> codes(static_cast<std::size_t>(hotels));
        for (int h = 0; h < hotels; ++h) codes[std::size_t(h)] = "h" + std::to_string(h);
        ContentQuery query;
        query.hotels = &pts;
        query.hotel_codes = &codes;
        query.clusters = &clusters;
        query.cluster_members = &members;
        query.n = 10;

        t0 = now_ms();
#pragma omp parallel for schedule(static) firstprivate(query)
        for (int q = 0; q < profiles; ++q) {
            query.profile = queries.row_span(q);
            recommend_content(query, RetrievalMode::FullScan);
        }
        const double parallel_ms = now_ms() - t0;
        print_row({"content full scan", serial_ms, parallel_ms});

        t0 = now_ms();
        for (int q = 0; q < profiles; ++q) {
            query.profile = queries.row_span(q);
            recommend_content(query, RetrievalMode::Clustered);
        }
        const double clustered_ms = now_ms() - t0;
        std::printf("  (cluster pruning, serial: %.1f ms vs full-scan serial %.1f ms, x%.1f)\n",
                    clustered_ms, serial_ms, serial_ms / (clustered_ms > 0 ? clustered_ms : 1e-9));
    }

    return 0;
}
