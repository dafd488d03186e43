#pragma once

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hotelrec/catalog.hpp"
#include "hotelrec/kmeans.hpp"
#include "hotelrec/linalg.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

// z-scores quantity features with the catalog's fitted params; binary
// features pass through unchanged.
std::vector<HotelFeatureVector> normalize_features(const std::vector<HotelFeatureVector>& hotels,
                                                   const FeatureCatalog& catalog);

struct UserProfile {
    std::string user_id;
    std::vector<double> profile;
};

// Arithmetic mean of the given vectors; errors on an empty list (cold user).
std::vector<double> build_profile(const std::vector<std::vector<double>>& vectors);
std::vector<double> build_profile(const Mat& vectors, std::span<const int> rows);

enum class RetrievalMode { FullScan, Clustered };

struct ContentQuery {
    std::span<const double> profile;
    const Mat* hotels = nullptr;                        // reduced hotel vectors
    const std::vector<std::string>* hotel_codes = nullptr;
    const ClusterModel* clusters = nullptr;             // required in Clustered mode
    const std::vector<std::vector<int>>* cluster_members = nullptr;
    const std::unordered_set<int>* exclude = nullptr;   // hotel row indices
    int n = 10;
};

struct ContentResult {
    RankedList list;  // score = -Euclidean distance; ties by hotel index
    // Clustered mode returned fewer than n because the nearest cluster
    // (minus exclusions) was too small
    bool cluster_exhausted = false;
    int cluster_id = -1;
};

ContentResult recommend_content(const ContentQuery& query, RetrievalMode mode);

// index of the centroid nearest to the profile, ties to the lowest id
int nearest_centroid(std::span<const double> profile, const Mat& centroids);

}  // namespace hotelrec
