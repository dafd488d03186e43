#include "hotelrec/content.hpp"

#include <algorithm>
#include <cmath>

namespace hotelrec {

std::vector<HotelFeatureVector> normalize_features(const std::vector<HotelFeatureVector>& hotels,
                                                   const FeatureCatalog& catalog) {
    if (!catalog.fitted) throw DataError("normalize_features: catalog not fitted");
    const int d = catalog.size();
    std::vector<HotelFeatureVector> out = hotels;
    for (auto& h : out) {
        if (int(h.features.size()) != d)
            throw DataError("normalize_features: hotel " + h.hotel_code + " length mismatch");
        for (int j = 0; j < d; ++j) {
            if (catalog.kinds[std::size_t(j)] == FeatureKind::Binary) continue;
            h.features[std::size_t(j)] =
                (h.features[std::size_t(j)] - catalog.mean[std::size_t(j)]) /
                catalog.stddev[std::size_t(j)];
        }
    }
    return out;
}

std::vector<double> build_profile(const std::vector<std::vector<double>>& vectors) {
    if (vectors.empty()) throw DataError("cannot build a profile from zero visited hotels");
    const std::size_t d = vectors.front().size();
    std::vector<double> profile(d, 0.0);
    for (const auto& v : vectors) {
        if (v.size() != d) throw DataError("profile input vectors have mixed lengths");
        for (std::size_t j = 0; j < d; ++j) profile[j] += v[j];
    }
    for (double& x : profile) x /= double(vectors.size());
    return profile;
}

std::vector<double> build_profile(const Mat& vectors, std::span<const int> rows) {
    if (rows.empty()) throw DataError("cannot build a profile from zero visited hotels");
    std::vector<double> profile(std::size_t(vectors.cols), 0.0);
    for (int r : rows) {
        const double* v = vectors.row(r);
        for (int j = 0; j < vectors.cols; ++j) profile[std::size_t(j)] += v[j];
    }
    for (double& x : profile) x /= double(rows.size());
    return profile;
}

int nearest_centroid(std::span<const double> profile, const Mat& centroids) {
    int best = 0;
    double best_d = squared_distance(profile, centroids.row_span(0));
    for (int c = 1; c < centroids.rows; ++c) {
        const double d = squared_distance(profile, centroids.row_span(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

namespace {

// (distance, hotel row) ascending; exact ties by hotel index
struct Candidate {
    double dist2;
    int row;
};

void push_topn(std::vector<Candidate>& heap, const Candidate& c, std::size_t n) {
    auto worse = [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        return a.row < b.row;
    };
    if (heap.size() < n) {
        heap.push_back(c);
        std::push_heap(heap.begin(), heap.end(), worse);
        return;
    }
    if (worse(c, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.back() = c;
        std::push_heap(heap.begin(), heap.end(), worse);
    }
}

}  // namespace

ContentResult recommend_content(const ContentQuery& query, RetrievalMode mode) {
    const Mat& hotels = *query.hotels;
    if (int(query.profile.size()) != hotels.cols)
        throw DataError("content query profile dimension mismatch");
    if (query.n < 0) throw ConfigError("content query n must be >= 0");

    ContentResult result;
    const std::unordered_set<int> empty_exclude;
    const auto& exclude = query.exclude ? *query.exclude : empty_exclude;

    std::vector<Candidate> heap;
    const std::size_t n = std::size_t(query.n);
    heap.reserve(n + 1);

    auto consider = [&](int row) {
        if (exclude.contains(row)) return;
        push_topn(heap, {squared_distance(query.profile, hotels.row_span(row)), row}, n);
    };

    if (mode == RetrievalMode::FullScan) {
        for (int row = 0; row < hotels.rows; ++row) consider(row);
    } else {
        if (query.clusters == nullptr || query.cluster_members == nullptr)
            throw ConfigError("clustered retrieval needs a cluster model");
        result.cluster_id = nearest_centroid(query.profile, query.clusters->centroids);
        for (int row : (*query.cluster_members)[std::size_t(result.cluster_id)]) consider(row);
        // nearest cluster too small: return what it has, flagged
    }

    std::sort(heap.begin(), heap.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
        return a.row < b.row;
    });
    result.list.items.reserve(heap.size());
    for (const auto& c : heap)
        result.list.items.push_back({(*query.hotel_codes)[std::size_t(c.row)],
                                     -std::sqrt(c.dist2)});
    result.cluster_exhausted = mode == RetrievalMode::Clustered && heap.size() < n;
    return result;
}

}  // namespace hotelrec
