#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

#include "hotelrec/catalog.hpp"
#include "hotelrec/sparse.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

struct AlsConfig {
    int latent_dim = 20;
    double lambda = 0.1;
    int sweeps = 15;
    double tol = 1e-4;  // relative loss improvement below this stops early
    std::uint64_t seed = 0;
};

struct FactorModel {
    int m = 0;  // users
    int u = 0;  // hotels
    int k = 0;
    AlsConfig config;
    std::vector<double> user_factors;   // m x k row-major
    std::vector<double> hotel_factors;  // u x k row-major

    const double* user_row(int i) const { return user_factors.data() + std::size_t(i) * k; }
    const double* hotel_row(int j) const { return hotel_factors.data() + std::size_t(j) * k; }
    double predict(int i, int j) const;
};

// Entries i.i.d. uniform in [0, 1/sqrt(k)], fully determined by the seed.
FactorModel init_factors(int m, int u, const AlsConfig& config);

enum class Side { Users, Hotels };

struct SweepStats {
    int singular_solves = 0;  // rows solved via pseudo-inverse (lambda = 0)
};

// One half-sweep: holds the opposite side fixed and solves each row's
// lambda-regularized least-squares problem over its observed entries.
// Rows with no observations keep their current factor. r_t must be the
// transpose of r.
SweepStats als_half_sweep(FactorModel& model, const SparseMatrix& r, const SparseMatrix& r_t,
                          Side side);

// Sum over observed entries of squared residual, plus lambda * (|P|^2 + |Q|^2).
double regularized_loss(const FactorModel& model, const SparseMatrix& r);

// Root mean squared residual over the observed entries only.
double observed_rmse(const FactorModel& model, const SparseMatrix& r);

struct SweepLoss {
    int sweep = 0;  // 1-based full sweep
    Side side = Side::Users;
    double loss = 0.0;
};

struct FitResult {
    FactorModel model;
    std::vector<SweepLoss> trace;
    int singular_solves = 0;
};

// Alternates user/hotel half-sweeps. The regularized loss is verified
// non-increasing; a NaN loss aborts with diagnostics.
FitResult fit_als(const SparseMatrix& r, const AlsConfig& config);

void write_loss_trace(std::ostream& out, const std::vector<SweepLoss>& trace);

// Predicts the user's full row, min-max normalizes it across all hotels,
// drops excluded (training-visited) hotels and returns the top n.
RankedList recommend_cf(const FactorModel& model, const InteractionMatrix& interactions,
                        const std::string& user_id, const std::unordered_set<int>& exclude,
                        int n);

// Binary model file: little-endian header (m, u, k, lambda, seed) followed
// by the two factor matrices and the id tables. Layout documented in the
// README.
void save_als(std::ostream& out, const FactorModel& model,
              const std::vector<std::string>& user_ids,
              const std::vector<std::string>& hotel_codes);

struct LoadedAls {
    FactorModel model;
    std::vector<std::string> user_ids;
    std::vector<std::string> hotel_codes;
};

LoadedAls load_als(std::istream& in);

}  // namespace hotelrec
