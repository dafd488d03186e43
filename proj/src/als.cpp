#include "hotelrec/als.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "hotelrec/linalg.hpp"
#include "hotelrec/rng.hpp"

namespace hotelrec {

double FactorModel::predict(int i, int j) const {
    return dot({user_row(i), std::size_t(k)}, {hotel_row(j), std::size_t(k)});
}

FactorModel init_factors(int m, int u, const AlsConfig& config) {
    if (m < 1 || u < 1) throw DataError("factor model needs at least one user and one hotel");
    if (config.latent_dim < 1) throw ConfigError("latent_dim must be >= 1");
    if (config.lambda < 0.0) throw ConfigError("lambda must be >= 0");
    FactorModel model;
    model.m = m;
    model.u = u;
    model.k = config.latent_dim;
    model.config = config;
    const double hi = 1.0 / std::sqrt(double(model.k));
    Rng rng(derive_seed(config.seed, "als-init"));
    model.user_factors.resize(std::size_t(m) * model.k);
    model.hotel_factors.resize(std::size_t(u) * model.k);
    for (auto& v : model.user_factors) v = rng.uniform() * hi;
    for (auto& v : model.hotel_factors) v = rng.uniform() * hi;
    return model;
}

namespace {

// Ridge solve for one row: (F^T F + lambda I) x = F^T r over the row's
// observed entries, where F stacks the fixed side's factors.
bool solve_row(const SparseMatrix& obs, int row, const std::vector<double>& fixed, int k,
               double lambda, double* out) {
    const std::int64_t begin = obs.row_ptr[row];
    const std::int64_t end = obs.row_ptr[row + 1];
    if (begin == end) return false;  // no observations: keep the current factor

    std::vector<double> A(std::size_t(k) * k, 0.0);
    std::vector<double> b(std::size_t(k), 0.0);
    for (std::int64_t p = begin; p < end; ++p) {
        const double* f = fixed.data() + std::size_t(obs.col[p]) * k;
        const double v = obs.val[p];
        for (int i = 0; i < k; ++i) {
            b[i] += v * f[i];
            for (int j = i; j < k; ++j) A[std::size_t(i) * k + j] += f[i] * f[j];
        }
    }
    for (int i = 0; i < k; ++i) {
        A[std::size_t(i) * k + i] += lambda;
        for (int j = 0; j < i; ++j) A[std::size_t(i) * k + j] = A[std::size_t(j) * k + i];
    }
    const auto solved = solve_sym(std::move(A), k, b);
    std::copy(b.begin(), b.end(), out);
    return solved.used_pseudo_inverse;
}

}  // namespace

SweepStats als_half_sweep(FactorModel& model, const SparseMatrix& r, const SparseMatrix& r_t,
                          Side side) {
    if (r.rows != model.m || r.cols != model.u)
        throw DataError("als sweep: matrix does not match model dimensions");
    const int k = model.k;
    const SparseMatrix& obs = side == Side::Users ? r : r_t;
    std::vector<double>& target = side == Side::Users ? model.user_factors : model.hotel_factors;
    const std::vector<double>& fixed = side == Side::Users ? model.hotel_factors : model.user_factors;

    const int rows = obs.rows;
    std::vector<unsigned char> pseudo(std::size_t(rows), 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (int row = 0; row < rows; ++row) {
        if (solve_row(obs, row, fixed, k, model.config.lambda,
                      target.data() + std::size_t(row) * k))
            pseudo[std::size_t(row)] = 1;
    }
    SweepStats stats;
    for (unsigned char p : pseudo) stats.singular_solves += p;
    return stats;
}

double regularized_loss(const FactorModel& model, const SparseMatrix& r) {
    // residuals accumulate into per-row slots so the sum order never
    // depends on the thread count
    std::vector<double> row_loss(std::size_t(r.rows), 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < r.rows; ++i) {
        double s = 0.0;
        for (std::int64_t p = r.row_ptr[i]; p < r.row_ptr[i + 1]; ++p) {
            const double e = r.val[p] - model.predict(i, r.col[p]);
            s += e * e;
        }
        row_loss[std::size_t(i)] = s;
    }
    double loss = 0.0;
    for (double s : row_loss) loss += s;
    double norms = 0.0;
    for (double v : model.user_factors) norms += v * v;
    for (double v : model.hotel_factors) norms += v * v;
    return loss + model.config.lambda * norms;
}

double observed_rmse(const FactorModel& model, const SparseMatrix& r) {
    if (r.nnz() == 0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < r.rows; ++i)
        for (std::int64_t p = r.row_ptr[i]; p < r.row_ptr[i + 1]; ++p) {
            const double e = r.val[p] - model.predict(i, r.col[p]);
            s += e * e;
        }
    return std::sqrt(s / double(r.nnz()));
}

FitResult fit_als(const SparseMatrix& r, const AlsConfig& config) {
    if (r.nnz() == 0) throw DataError("als fit on an empty interaction matrix");
    if (config.sweeps < 1) throw ConfigError("als sweeps must be >= 1");

    FitResult result;
    result.model = init_factors(r.rows, r.cols, config);
    const SparseMatrix r_t = r.transposed();

    double prev_full = regularized_loss(result.model, r);
    for (int sweep = 1; sweep <= config.sweeps; ++sweep) {
        for (Side side : {Side::Users, Side::Hotels}) {
            const auto stats = als_half_sweep(result.model, r, r_t, side);
            result.singular_solves += stats.singular_solves;
            const double loss = regularized_loss(result.model, r);
            if (!std::isfinite(loss))
                throw NumericError("als loss is not finite at sweep " + std::to_string(sweep) +
                                   " (" + (side == Side::Users ? "users" : "hotels") +
                                   "); lambda=" + std::to_string(config.lambda));
            result.trace.push_back({sweep, side, loss});
        }
        const double cur = result.trace.back().loss;
        if (config.tol > 0.0 && prev_full > 0.0 &&
            (prev_full - cur) / prev_full < config.tol)
            break;
        prev_full = cur;
    }
    return result;
}

void write_loss_trace(std::ostream& out, const std::vector<SweepLoss>& trace) {
    out << "sweep,side,loss\n";
    out.precision(17);
    for (const auto& t : trace)
        out << t.sweep << ',' << (t.side == Side::Users ? "users" : "hotels") << ',' << t.loss
            << '\n';
}

RankedList recommend_cf(const FactorModel& model, const InteractionMatrix& interactions,
                        const std::string& user_id, const std::unordered_set<int>& exclude,
                        int n) {
    const auto it = interactions.user_index.find(user_id);
    if (it == interactions.user_index.end())
        throw DataError("unknown user: " + user_id);
    const int row = it->second;
    if (model.m != interactions.users() || model.u != interactions.hotels())
        throw DataError("factor model does not match the interaction matrix");

    std::vector<double> scores(std::size_t(model.u));
    for (int j = 0; j < model.u; ++j) scores[std::size_t(j)] = model.predict(row, j);

    // min-max over the full predicted row; a constant row maps to 0.5
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *lo_it, span = *hi_it - *lo_it;
    for (double& s : scores) s = span > 0.0 ? (s - lo) / span : 0.5;

    std::vector<int> order;
    order.reserve(std::size_t(model.u));
    for (int j = 0; j < model.u; ++j)
        if (!exclude.contains(j)) order.push_back(j);
    const std::size_t top = std::min<std::size_t>(order.size(), std::size_t(std::max(n, 0)));
    std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](int a, int b) {
        if (scores[std::size_t(a)] != scores[std::size_t(b)])
            return scores[std::size_t(a)] > scores[std::size_t(b)];
        return a < b;
    });

    RankedList list;
    list.user_id = user_id;
    list.items.reserve(top);
    for (std::size_t i = 0; i < top; ++i)
        list.items.push_back(
            {interactions.hotel_codes[std::size_t(order[i])], scores[std::size_t(order[i])]});
    return list;
}

namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw DataError("als model file truncated");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put(out, std::uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}

std::string take_string(std::istream& in) {
    const auto len = take<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), std::streamsize(len));
    if (!in) throw DataError("als model file truncated");
    return s;
}

constexpr char kMagic[8] = {'H', 'R', 'A', 'L', 'S', 'M', '0', '1'};

}  // namespace

void save_als(std::ostream& out, const FactorModel& model,
              const std::vector<std::string>& user_ids,
              const std::vector<std::string>& hotel_codes) {
    out.write(kMagic, sizeof kMagic);
    put(out, std::uint64_t(model.m));
    put(out, std::uint64_t(model.u));
    put(out, std::uint64_t(model.k));
    put(out, model.config.lambda);
    put(out, std::uint64_t(model.config.seed));
    out.write(reinterpret_cast<const char*>(model.user_factors.data()),
              std::streamsize(model.user_factors.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(model.hotel_factors.data()),
              std::streamsize(model.hotel_factors.size() * sizeof(double)));
    put(out, std::uint64_t(user_ids.size()));
    for (const auto& s : user_ids) put_string(out, s);
    put(out, std::uint64_t(hotel_codes.size()));
    for (const auto& s : hotel_codes) put_string(out, s);
}

LoadedAls load_als(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw DataError("not an als model file");
    LoadedAls loaded;
    FactorModel& model = loaded.model;
    model.m = int(take<std::uint64_t>(in));
    model.u = int(take<std::uint64_t>(in));
    model.k = int(take<std::uint64_t>(in));
    model.config.latent_dim = model.k;
    model.config.lambda = take<double>(in);
    model.config.seed = take<std::uint64_t>(in);
    model.user_factors.resize(std::size_t(model.m) * model.k);
    model.hotel_factors.resize(std::size_t(model.u) * model.k);
    in.read(reinterpret_cast<char*>(model.user_factors.data()),
            std::streamsize(model.user_factors.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(model.hotel_factors.data()),
            std::streamsize(model.hotel_factors.size() * sizeof(double)));
    if (!in) throw DataError("als model file truncated");
    const auto nu = take<std::uint64_t>(in);
    loaded.user_ids.reserve(nu);
    for (std::uint64_t i = 0; i < nu; ++i) loaded.user_ids.push_back(take_string(in));
    const auto nh = take<std::uint64_t>(in);
    loaded.hotel_codes.reserve(nh);
    for (std::uint64_t i = 0; i < nh; ++i) loaded.hotel_codes.push_back(take_string(in));
    return loaded;
}

}  // namespace hotelrec
