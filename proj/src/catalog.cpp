#include "hotelrec/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "hotelrec/csv.hpp"

namespace hotelrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

}  // namespace

ParsedReservations parse_reservations(std::istream& in) {
    if (!in) throw DataError("reservation stream unreadable");
    ParsedReservations out;
    std::string line;
    if (!std::getline(in, line)) throw DataError("reservation stream empty (missing header)");
    line = csv::normalize_line(std::move(line), true);
    if (line != "user_id,hotel_code,date")
        throw DataError("reservations header must be user_id,hotel_code,date, got: " + line);

    std::int64_t file_line = 1;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        ++file_line;
        line = csv::normalize_line(std::move(line), false);
        if (line.empty()) continue;
        auto fields = csv::split_fields(line);
        if (fields.size() != 3) {
            out.rejects.push_back({file_line, "expected 3 fields"});
            continue;
        }
        if (fields[0].empty()) {
            out.rejects.push_back({file_line, "empty user_id"});
            continue;
        }
        if (fields[1].empty()) {
            out.rejects.push_back({file_line, "empty hotel_code"});
            continue;
        }
        auto date = parse_date(fields[2]);
        if (!date) {
            out.rejects.push_back({file_line, "invalid date: " + fields[2]});
            continue;
        }
        out.records.push_back({std::move(fields[0]), std::move(fields[1]), *date, row++});
    }
    if (in.bad()) throw DataError("I/O failure while reading reservations");
    return out;
}

ParsedReservations parse_reservations_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_reservations(in);
}

void write_reservations(std::ostream& out, const std::vector<ReservationRecord>& records) {
    out << "user_id,hotel_code,date\n";
    for (const auto& r : records)
        out << r.user_id << ',' << r.hotel_code << ',' << format_date(r.date) << '\n';
}

void write_rejects(std::ostream& out, const std::vector<RejectRow>& rejects) {
    out << "line,reason\n";
    for (const auto& r : rejects) out << r.line << ',' << r.reason << '\n';
}

HotelTable parse_hotels(std::istream& in) {
    if (!in) throw DataError("hotel stream unreadable");
    HotelTable out;
    std::string line;
    if (!std::getline(in, line)) throw DataError("hotel stream empty (missing header)");
    line = csv::normalize_line(std::move(line), true);
    auto header = csv::split_fields(line);
    if (header.size() < 2 || header[0] != "hotel_code")
        throw DataError("hotels header must start with hotel_code and name features");
    out.feature_names.assign(header.begin() + 1, header.end());

    std::unordered_set<std::string> seen;
    std::int64_t file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        line = csv::normalize_line(std::move(line), false);
        if (line.empty()) continue;
        auto fields = csv::split_fields(line);
        if (fields.size() != header.size()) {
            out.rejects.push_back({file_line, "expected " + std::to_string(header.size()) + " fields"});
            continue;
        }
        if (fields[0].empty()) {
            out.rejects.push_back({file_line, "empty hotel_code"});
            continue;
        }
        if (!seen.insert(fields[0]).second) {
            out.rejects.push_back({file_line, "duplicate hotel_code: " + fields[0]});
            continue;
        }
        HotelFeatureVector h;
        h.hotel_code = std::move(fields[0]);
        h.features.reserve(fields.size() - 1);
        bool bad = false;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                h.features.push_back(kNaN);  // missing
                continue;
            }
            auto v = csv::parse_double(fields[i]);
            if (!v || !std::isfinite(*v)) {
                out.rejects.push_back(
                    {file_line, "invalid numeric cell in " + out.feature_names[i - 1]});
                seen.erase(h.hotel_code);
                bad = true;
                break;
            }
            h.features.push_back(*v);
        }
        if (!bad) out.hotels.push_back(std::move(h));
    }
    if (in.bad()) throw DataError("I/O failure while reading hotels");
    return out;
}

HotelTable parse_hotels_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_hotels(in);
}

void write_hotels(std::ostream& out, const std::vector<std::string>& feature_names,
                  const std::vector<HotelFeatureVector>& hotels) {
    out << "hotel_code";
    for (const auto& n : feature_names) out << ',' << n;
    out << '\n';
    for (const auto& h : hotels) {
        out << h.hotel_code;
        for (double v : h.features) {
            out << ',';
            if (!std::isnan(v)) out << csv::format_double(v);
        }
        out << '\n';
    }
}

int FeatureCatalog::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return -1;
}

FeatureCatalog make_catalog(std::vector<std::string> names) {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second) throw DataError("duplicate feature name: " + n);
    FeatureCatalog c;
    c.names = std::move(names);
    c.kinds.assign(c.names.size(), FeatureKind::Quantity);
    c.mean.assign(c.names.size(), 0.0);
    c.stddev.assign(c.names.size(), 1.0);
    return c;
}

std::vector<PlausibilityBound> parse_bounds(std::string_view text,
                                            const std::vector<std::string>& feature_names) {
    std::vector<PlausibilityBound> bounds;
    if (text.empty()) return bounds;
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        start = end + 1;
        if (item.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t c1 = item.find(':');
        const std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                            : item.find(':', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            throw ConfigError("bound must be name:lo:hi, got: " + std::string(item));
        PlausibilityBound b;
        b.feature = std::string(item.substr(0, c1));
        auto parse_endpoint = [&](std::string_view s, double fallback) {
            if (s.empty() || s == "inf" || s == "-inf")
                return s == "-inf" ? -inf : (s == "inf" ? inf : fallback);
            auto v = csv::parse_double(s);
            if (!v) throw ConfigError("bad bound endpoint: " + std::string(s));
            return *v;
        };
        b.lo = parse_endpoint(item.substr(c1 + 1, c2 - c1 - 1), -inf);
        b.hi = parse_endpoint(item.substr(c2 + 1), inf);
        if (std::find(feature_names.begin(), feature_names.end(), b.feature) ==
            feature_names.end())
            throw ConfigError("bound names unknown feature: " + b.feature);
        bounds.push_back(std::move(b));
        if (end == text.size()) break;
    }
    return bounds;
}

std::vector<HotelFeatureVector> clean_hotels(const std::vector<HotelFeatureVector>& raw,
                                             const FeatureCatalog& catalog,
                                             const std::vector<PlausibilityBound>& bounds) {
    const std::size_t dim = catalog.names.size();
    for (const auto& h : raw)
        if (h.features.size() != dim)
            throw DataError("hotel " + h.hotel_code + " has " + std::to_string(h.features.size()) +
                            " features, catalog has " + std::to_string(dim));

    std::vector<std::pair<int, const PlausibilityBound*>> indexed;
    for (const auto& b : bounds) {
        const int idx = catalog.index_of(b.feature);
        if (idx < 0) throw ConfigError("bound names unknown feature: " + b.feature);
        indexed.emplace_back(idx, &b);
    }

    // pass 1: drop implausible rows (checked on observed cells only)
    std::vector<HotelFeatureVector> kept;
    kept.reserve(raw.size());
    for (const auto& h : raw) {
        bool ok = true;
        for (const auto& [idx, b] : indexed) {
            const double v = h.features[idx];
            if (!std::isnan(v) && (v < b->lo || v > b->hi)) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(h);
    }
    if (kept.empty()) throw DataError("all hotel rows dropped by plausibility bounds");

    // pass 2: column means over surviving rows, then impute
    std::vector<double> sum(dim, 0.0);
    std::vector<std::int64_t> cnt(dim, 0);
    for (const auto& h : kept)
        for (std::size_t j = 0; j < dim; ++j)
            if (!std::isnan(h.features[j])) {
                sum[j] += h.features[j];
                ++cnt[j];
            }
    for (std::size_t j = 0; j < dim; ++j)
        if (cnt[j] == 0)
            throw DataError("feature " + catalog.names[j] + " has no observed values");

    for (auto& h : kept)
        for (std::size_t j = 0; j < dim; ++j)
            if (std::isnan(h.features[j])) h.features[j] = sum[j] / double(cnt[j]);
    return kept;
}

void fit_catalog(FeatureCatalog& catalog, std::vector<HotelFeatureVector>& hotels) {
    if (hotels.size() < 2) throw DataError("catalog fit needs at least 2 hotels");
    const std::size_t dim = catalog.names.size();
    for (const auto& h : hotels) {
        if (h.features.size() != dim) throw DataError("hotel feature length mismatch in fit");
        for (double v : h.features)
            if (!std::isfinite(v)) throw DataError("unclean hotel data in fit: " + h.hotel_code);
    }

    const double n = double(hotels.size());
    std::vector<double> mean(dim, 0.0), sq(dim, 0.0);
    std::vector<bool> binary(dim, true), constant(dim, true);
    for (const auto& h : hotels)
        for (std::size_t j = 0; j < dim; ++j) {
            const double v = h.features[j];
            mean[j] += v;
            if (v != 0.0 && v != 1.0) binary[j] = false;
            if (v != hotels.front().features[j]) constant[j] = false;
        }
    for (std::size_t j = 0; j < dim; ++j) mean[j] /= n;
    for (const auto& h : hotels)
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = h.features[j] - mean[j];
            sq[j] += d * d;
        }

    std::vector<int> keep;
    for (std::size_t j = 0; j < dim; ++j)
        if (!constant[j]) keep.push_back(int(j));
    if (keep.empty()) throw DataError("all feature columns are constant");

    FeatureCatalog fitted;
    for (int j : keep) {
        fitted.names.push_back(catalog.names[j]);
        fitted.kinds.push_back(binary[j] ? FeatureKind::Binary : FeatureKind::Quantity);
        fitted.mean.push_back(mean[j]);
        fitted.stddev.push_back(std::sqrt(sq[j] / (n - 1.0)));
    }
    fitted.fitted = true;

    if (keep.size() != dim) {
        for (auto& h : hotels) {
            std::vector<double> reduced;
            reduced.reserve(keep.size());
            for (int j : keep) reduced.push_back(h.features[j]);
            h.features = std::move(reduced);
        }
    }
    catalog = std::move(fitted);
}

void save_catalog(std::ostream& out, const FeatureCatalog& catalog) {
    out << "feature,kind,mean,stddev\n";
    for (std::size_t j = 0; j < catalog.names.size(); ++j)
        out << catalog.names[j] << ','
            << (catalog.kinds[j] == FeatureKind::Binary ? "binary" : "quantity") << ','
            << csv::format_double(catalog.mean[j]) << ',' << csv::format_double(catalog.stddev[j])
            << '\n';
}

FeatureCatalog load_catalog(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        csv::normalize_line(std::move(line), true) != "feature,kind,mean,stddev")
        throw DataError("bad catalog file header");
    FeatureCatalog c;
    while (std::getline(in, line)) {
        line = csv::normalize_line(std::move(line), false);
        if (line.empty()) continue;
        auto f = csv::split_fields(line);
        if (f.size() != 4) throw DataError("bad catalog row: " + line);
        c.names.push_back(f[0]);
        if (f[1] == "binary")
            c.kinds.push_back(FeatureKind::Binary);
        else if (f[1] == "quantity")
            c.kinds.push_back(FeatureKind::Quantity);
        else
            throw DataError("bad feature kind: " + f[1]);
        auto m = csv::parse_double(f[2]);
        auto s = csv::parse_double(f[3]);
        if (!m || !s) throw DataError("bad catalog numbers: " + line);
        c.mean.push_back(*m);
        c.stddev.push_back(*s);
    }
    c.fitted = true;
    return c;
}

double InteractionMatrix::count_sum() const {
    double s = 0.0;
    for (double v : counts.val) s += v;
    return s;
}

InteractionMatrix build_interactions(const std::vector<ReservationRecord>& records) {
    if (records.empty()) throw DataError("cannot build interactions from zero records");
    InteractionMatrix m;
    std::vector<Triplet> triplets;
    triplets.reserve(records.size());
    for (const auto& r : records) {
        auto [uit, unew] = m.user_index.try_emplace(r.user_id, int(m.user_ids.size()));
        if (unew) m.user_ids.push_back(r.user_id);
        auto [hit, hnew] = m.hotel_index.try_emplace(r.hotel_code, int(m.hotel_codes.size()));
        if (hnew) m.hotel_codes.push_back(r.hotel_code);
        triplets.push_back({uit->second, hit->second, 1.0});
    }
    m.counts = sparse_from_triplets(int(m.user_ids.size()), int(m.hotel_codes.size()),
                                    std::move(triplets));
    return m;
}

}  // namespace hotelrec
