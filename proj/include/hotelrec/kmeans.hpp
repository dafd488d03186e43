#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hotelrec/linalg.hpp"

namespace hotelrec {

struct ClusterModel {
    int k = 0;
    int dim = 0;
    Mat centroids;                // k x dim, each the mean of its members
    std::vector<int> assignment;  // point index -> cluster id
    int iterations = 0;
    // objective after each assignment step (sum of squared distances)
    std::vector<double> objective_trace;

    std::vector<std::vector<int>> members() const;
};

// Lloyd's algorithm. Centroids start at k distinct sampled points; runs to
// an assignment fixpoint or max_iter. A cluster that empties is re-seeded
// at the point farthest from its assigned centroid; clusters still empty at
// the end are dropped. Deterministic given the seed.
ClusterModel fit_kmeans(const Mat& points, int k, int max_iter, std::uint64_t seed);

double kmeans_objective(const Mat& points, const Mat& centroids,
                        const std::vector<int>& assignment);

void save_kmeans(std::ostream& out, const ClusterModel& model);
ClusterModel load_kmeans(std::istream& in);

}  // namespace hotelrec
