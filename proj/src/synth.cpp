#include "hotelrec/synth.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "hotelrec/catalog.hpp"
#include "hotelrec/rng.hpp"

namespace hotelrec {

double SynthTruth::affinity(int user, int hotel) const {
    double s = 0.0;
    const double* p = user_latent.row(user);
    const double* q = hotel_latent.row(hotel);
    for (int j = 0; j < user_latent.cols; ++j) s += p[j] * q[j];
    return s;
}

std::vector<int> SynthTruth::affinity_ranking(int user) const {
    std::vector<int> order(std::size_t(hotel_latent.rows));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double fa = affinity(user, a), fb = affinity(user, b);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    return order;
}

namespace {

void validate(const SynthSpec& spec) {
    if (spec.users < 1 || spec.hotels < 1) throw ConfigError("synth: users and hotels must be >= 1");
    if (spec.feature_dim < 1) throw ConfigError("synth: feature_dim must be >= 1");
    if (spec.latent_rank < 1 || spec.latent_rank > std::min(spec.users, spec.hotels))
        throw ConfigError("synth: latent_rank must be in [1, min(users, hotels)]");
    if (spec.res_min < 2) throw ConfigError("synth: res_min must be >= 2");
    if (spec.res_max < spec.res_min) throw ConfigError("synth: res_max must be >= res_min");
    if (spec.clusters < 1 || spec.clusters > spec.hotels)
        throw ConfigError("synth: clusters must be in [1, hotels]");
}

}  // namespace

SynthOutput generate(const SynthSpec& spec) {
    validate(spec);
    SynthOutput out;

    // The first two columns are binary amenity flags when there is room for
    // them; the rest are quantities spread around the planted centroid.
    const int binary_cols = spec.feature_dim >= 4 ? 2 : 0;
    out.feature_names.reserve(std::size_t(spec.feature_dim));
    for (int j = 0; j < binary_cols; ++j) out.feature_names.push_back("amenity_" + std::to_string(j + 1));
    for (int j = binary_cols; j < spec.feature_dim; ++j)
        out.feature_names.push_back("feature_" + std::to_string(j + 1));

    Rng hotel_rng(derive_seed(spec.seed, "synth-hotels"));
    out.truth.centroids = Mat(spec.clusters, spec.feature_dim);
    for (int c = 0; c < spec.clusters; ++c) {
        double* ctr = out.truth.centroids.row(c);
        for (int j = 0; j < binary_cols; ++j) ctr[j] = double((c >> j) & 1);
        for (int j = binary_cols; j < spec.feature_dim; ++j) ctr[j] = hotel_rng.uniform(0.0, 100.0);
    }

    constexpr double kNoise = 2.0;
    out.hotels.reserve(std::size_t(spec.hotels));
    out.truth.hotel_cluster.resize(std::size_t(spec.hotels));
    for (int h = 0; h < spec.hotels; ++h) {
        const int c = int(hotel_rng.uniform_int(0, spec.clusters - 1));
        out.truth.hotel_cluster[std::size_t(h)] = c;
        HotelFeatureVector v;
        v.hotel_code = "h" + std::to_string(h + 1);
        v.features.resize(std::size_t(spec.feature_dim));
        const double* ctr = out.truth.centroids.row(c);
        for (int j = 0; j < binary_cols; ++j) v.features[std::size_t(j)] = ctr[j];
        for (int j = binary_cols; j < spec.feature_dim; ++j)
            v.features[std::size_t(j)] = ctr[j] + hotel_rng.normal(0.0, kNoise);
        out.hotels.push_back(std::move(v));
    }

    Rng latent_rng(derive_seed(spec.seed, "synth-latent"));
    out.truth.user_latent = Mat(spec.users, spec.latent_rank);
    out.truth.hotel_latent = Mat(spec.hotels, spec.latent_rank);
    for (double& v : out.truth.user_latent.a) v = latent_rng.uniform();
    for (double& v : out.truth.hotel_latent.a) v = latent_rng.uniform();

    // Stays per user, hotels drawn proportionally to planted affinity,
    // dates strictly increasing. Per-user streams keep generation shardable.
    const std::int64_t base_day = days_from_civil(2018, 1, 1);
    std::vector<std::vector<ReservationRecord>> per_user(std::size_t(spec.users));
#pragma omp parallel for schedule(static)
    for (int uidx = 0; uidx < spec.users; ++uidx) {
        Rng rng(derive_seed(spec.seed, "synth-user", std::uint64_t(uidx)));
        std::vector<double> cumulative(std::size_t(spec.hotels));
        double total = 0.0;
        for (int h = 0; h < spec.hotels; ++h) {
            total += out.truth.affinity(uidx, h);
            cumulative[std::size_t(h)] = total;
        }
        const int stays = int(rng.uniform_int(spec.res_min, spec.res_max));
        std::int64_t day = base_day;
        auto& records = per_user[std::size_t(uidx)];
        records.reserve(std::size_t(stays));
        for (int s = 0; s < stays; ++s) {
            const double draw = rng.uniform() * total;
            const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), draw);
            const int hotel = int(it - cumulative.begin());
            day += rng.uniform_int(1, 20);
            records.push_back({"u" + std::to_string(uidx + 1),
                               out.hotels[std::size_t(std::min(hotel, spec.hotels - 1))].hotel_code,
                               date_from_serial(day), 0});
        }
    }

    std::int64_t row = 0;
    for (auto& bucket : per_user)
        for (auto& r : bucket) {
            r.row = row++;
            out.records.push_back(std::move(r));
        }
    return out;
}

void write_synth(const SynthOutput& out, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "reservations.csv");
        if (!f) throw DataError("cannot write " + (dir / "reservations.csv").string());
        write_reservations(f, out.records);
    }
    {
        std::ofstream f(dir / "hotels.csv");
        if (!f) throw DataError("cannot write " + (dir / "hotels.csv").string());
        write_hotels(f, out.feature_names, out.hotels);
    }
    nlohmann::json truth;
    truth["clusters"] = out.truth.centroids.rows;
    truth["feature_dim"] = out.truth.centroids.cols;
    truth["latent_rank"] = out.truth.user_latent.cols;
    truth["centroids"] = nlohmann::json::array();
    for (int c = 0; c < out.truth.centroids.rows; ++c)
        truth["centroids"].push_back(std::vector<double>(
            out.truth.centroids.row(c), out.truth.centroids.row(c) + out.truth.centroids.cols));
    truth["hotel_cluster"] = out.truth.hotel_cluster;
    truth["user_latent"] = nlohmann::json::array();
    for (int i = 0; i < out.truth.user_latent.rows; ++i)
        truth["user_latent"].push_back(std::vector<double>(
            out.truth.user_latent.row(i), out.truth.user_latent.row(i) + out.truth.user_latent.cols));
    truth["hotel_latent"] = nlohmann::json::array();
    for (int i = 0; i < out.truth.hotel_latent.rows; ++i)
        truth["hotel_latent"].push_back(std::vector<double>(
            out.truth.hotel_latent.row(i), out.truth.hotel_latent.row(i) + out.truth.hotel_latent.cols));
    std::ofstream f(dir / "truth.json");
    if (!f) throw DataError("cannot write " + (dir / "truth.json").string());
    f << truth.dump(2) << '\n';
}

}  // namespace hotelrec
