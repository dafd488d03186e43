#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hotelrec/linalg.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

struct SynthSpec {
    int users = 1000;
    int hotels = 200;
    int feature_dim = 24;
    int latent_rank = 5;
    int res_min = 2;   // reservations per user, inclusive
    int res_max = 10;
    int clusters = 8;
    std::uint64_t seed = 42;
};

// Planted structure the pipeline is expected to recover.
struct SynthTruth {
    Mat centroids;                  // clusters x feature_dim (raw feature space)
    std::vector<int> hotel_cluster; // hotel row -> planted cluster
    Mat user_latent;                // users x latent_rank
    Mat hotel_latent;               // hotels x latent_rank

    double affinity(int user, int hotel) const;
    // hotel indices sorted by planted affinity, best first
    std::vector<int> affinity_ranking(int user) const;
};

struct SynthOutput {
    std::vector<ReservationRecord> records;
    std::vector<std::string> feature_names;
    std::vector<HotelFeatureVector> hotels;
    SynthTruth truth;
};

// Hotels sit around planted centroids (first two columns are binary amenity
// flags when feature_dim allows); each user's stays are drawn with
// probability proportional to the planted latent affinity, with strictly
// increasing dates. Same seed, same corpus.
SynthOutput generate(const SynthSpec& spec);

// reservations.csv + hotels.csv in the ingest schemas, plus truth.json
void write_synth(const SynthOutput& out, const std::filesystem::path& dir);

}  // namespace hotelrec
