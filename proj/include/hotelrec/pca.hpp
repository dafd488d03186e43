#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hotelrec/linalg.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

struct PcaModel {
    int input_dim = 0;
    int out_dim = 0;
    // components.row(j) is the j-th principal axis (unit length);
    // rows are mutually orthonormal and ordered by explained variance
    Mat components;
    std::vector<double> explained_variance;  // non-increasing
    std::vector<double> input_mean;
};

// Top out_dim eigenpairs of the sample covariance of the given vectors.
// Component signs are canonicalized (largest-magnitude entry positive).
PcaModel fit_pca(const std::vector<HotelFeatureVector>& normalized, int out_dim);

std::vector<double> project(const PcaModel& model, std::span<const double> vec);

// mean + components^T z; used by tests and diagnostics
std::vector<double> reconstruct(const PcaModel& model, std::span<const double> reduced);

// Projects every hotel row; rows of the result align with the input order.
Mat project_all(const PcaModel& model, const std::vector<HotelFeatureVector>& hotels);

void save_pca(std::ostream& out, const PcaModel& model);
PcaModel load_pca(std::istream& in);

}  // namespace hotelrec
