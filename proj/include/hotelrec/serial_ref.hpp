#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "hotelrec/als.hpp"
#include "hotelrec/kmeans.hpp"
#include "hotelrec/linalg.hpp"
#include "hotelrec/sparse.hpp"

// Plain single-threaded implementations of the parallel kernels. Tests
// cross-check the OpenMP paths against these, and the bench tool compares
// their wall times. Written independently: the ridge solves here use
// Gaussian elimination rather than the Cholesky path.
namespace hotelrec::serial {

void als_half_sweep(FactorModel& model, const SparseMatrix& r, const SparseMatrix& r_t,
                    Side side);

double regularized_loss(const FactorModel& model, const SparseMatrix& r);

ClusterModel fit_kmeans(const Mat& points, int k, int max_iter, std::uint64_t seed);

// Full-scan nearest hotels by squared Euclidean distance; returns row
// indices, nearest first, ties by index.
std::vector<int> nearest_hotels(std::span<const double> profile, const Mat& hotels,
                                const std::unordered_set<int>& exclude, int n);

}  // namespace hotelrec::serial
