#include "hotelrec/pca.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "hotelrec/csv.hpp"

namespace hotelrec {

PcaModel fit_pca(const std::vector<HotelFeatureVector>& normalized, int out_dim) {
    if (normalized.empty()) throw DataError("pca fit on empty hotel list");
    const int d = int(normalized.front().features.size());
    if (out_dim < 1 || out_dim > d)
        throw DataError("pca out_dim " + std::to_string(out_dim) + " out of range for " +
                        std::to_string(d) + " features");
    const int n = int(normalized.size());
    if (n < out_dim + 1)
        throw DataError("pca fit needs at least out_dim + 1 hotels, got " + std::to_string(n));
    for (const auto& h : normalized)
        if (int(h.features.size()) != d) throw DataError("ragged feature vectors in pca fit");

    PcaModel model;
    model.input_dim = d;
    model.out_dim = out_dim;
    model.input_mean.assign(std::size_t(d), 0.0);
    for (const auto& h : normalized)
        for (int j = 0; j < d; ++j) model.input_mean[j] += h.features[j];
    for (int j = 0; j < d; ++j) model.input_mean[j] /= double(n);

    // sample covariance
    std::vector<double> cov(std::size_t(d) * d, 0.0);
    std::vector<double> centered(static_cast<std::size_t>(d));
    for (const auto& h : normalized) {
        for (int j = 0; j < d; ++j) centered[j] = h.features[j] - model.input_mean[j];
        for (int i = 0; i < d; ++i) {
            const double ci = centered[i];
            for (int j = i; j < d; ++j) cov[std::size_t(i) * d + j] += ci * centered[j];
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const double v = cov[std::size_t(i) * d + j] / double(n - 1);
            cov[std::size_t(i) * d + j] = v;
            cov[std::size_t(j) * d + i] = v;
        }

    std::vector<double> evals, evecs;
    jacobi_eigh(cov, d, evals, evecs);

    model.components = Mat(out_dim, d);
    model.explained_variance.resize(std::size_t(out_dim));
    for (int j = 0; j < out_dim; ++j) {
        model.explained_variance[j] = std::max(0.0, evals[j]);
        const double* src = evecs.data() + std::size_t(j) * d;
        double* dst = model.components.row(j);
        std::copy(src, src + d, dst);
        // canonical sign: the largest-magnitude coordinate is positive
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(dst[i]) > std::abs(dst[arg])) arg = i;
        if (dst[arg] < 0.0)
            for (int i = 0; i < d; ++i) dst[i] = -dst[i];
    }
    return model;
}

std::vector<double> project(const PcaModel& model, std::span<const double> vec) {
    if (int(vec.size()) != model.input_dim)
        throw DataError("project: vector length " + std::to_string(vec.size()) +
                        " != input_dim " + std::to_string(model.input_dim));
    std::vector<double> out(std::size_t(model.out_dim), 0.0);
    for (int j = 0; j < model.out_dim; ++j) {
        const double* c = model.components.row(j);
        double s = 0.0;
        for (int i = 0; i < model.input_dim; ++i) s += c[i] * (vec[i] - model.input_mean[i]);
        out[j] = s;
    }
    return out;
}

std::vector<double> reconstruct(const PcaModel& model, std::span<const double> reduced) {
    if (int(reduced.size()) != model.out_dim) throw DataError("reconstruct: dimension mismatch");
    std::vector<double> out(model.input_mean.begin(), model.input_mean.end());
    for (int j = 0; j < model.out_dim; ++j) {
        const double* c = model.components.row(j);
        for (int i = 0; i < model.input_dim; ++i) out[i] += reduced[j] * c[i];
    }
    return out;
}

Mat project_all(const PcaModel& model, const std::vector<HotelFeatureVector>& hotels) {
    Mat out(int(hotels.size()), model.out_dim);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < int(hotels.size()); ++i) {
        auto z = project(model, hotels[std::size_t(i)].features);
        std::copy(z.begin(), z.end(), out.row(i));
    }
    return out;
}

void save_pca(std::ostream& out, const PcaModel& model) {
    out << "pca," << model.input_dim << ',' << model.out_dim << '\n';
    out << "mean";
    for (double v : model.input_mean) out << ',' << csv::format_double(v);
    out << "\nvariance";
    for (double v : model.explained_variance) out << ',' << csv::format_double(v);
    out << '\n';
    for (int j = 0; j < model.out_dim; ++j) {
        out << "component";
        const double* c = model.components.row(j);
        for (int i = 0; i < model.input_dim; ++i) out << ',' << csv::format_double(c[i]);
        out << '\n';
    }
}

PcaModel load_pca(std::istream& in) {
    auto next_fields = [&](const char* what) {
        std::string line;
        if (!std::getline(in, line)) throw DataError(std::string("pca file truncated at ") + what);
        return csv::split_fields(csv::normalize_line(std::move(line), false));
    };
    auto head = next_fields("header");
    if (head.size() != 3 || head[0] != "pca") throw DataError("bad pca file header");
    PcaModel model;
    model.input_dim = int(*csv::parse_int(head[1]));
    model.out_dim = int(*csv::parse_int(head[2]));

    auto parse_row = [&](const std::vector<std::string>& f, const char* tag, int count) {
        if (f.empty() || f[0] != tag || int(f.size()) != count + 1)
            throw DataError(std::string("bad pca row, expected ") + tag);
        std::vector<double> v;
        v.reserve(std::size_t(count));
        for (int i = 1; i <= count; ++i) {
            auto x = csv::parse_double(f[std::size_t(i)]);
            if (!x) throw DataError("bad pca number");
            v.push_back(*x);
        }
        return v;
    };
    model.input_mean = parse_row(next_fields("mean"), "mean", model.input_dim);
    model.explained_variance = parse_row(next_fields("variance"), "variance", model.out_dim);
    model.components = Mat(model.out_dim, model.input_dim);
    for (int j = 0; j < model.out_dim; ++j) {
        auto row = parse_row(next_fields("component"), "component", model.input_dim);
        std::copy(row.begin(), row.end(), model.components.row(j));
    }
    return model;
}

}  // namespace hotelrec
