#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hotelrec/sparse.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

struct RejectRow {
    std::int64_t line = 0;  // 1-based file line (header is line 1)
    std::string reason;
};

struct ParsedReservations {
    std::vector<ReservationRecord> records;
    std::vector<RejectRow> rejects;
};

// Header must be exactly `user_id,hotel_code,date`. Malformed rows are
// collected, not fatal; an unreadable stream is.
ParsedReservations parse_reservations(std::istream& in);
ParsedReservations parse_reservations_file(const std::filesystem::path& path);

void write_reservations(std::ostream& out, const std::vector<ReservationRecord>& records);
void write_rejects(std::ostream& out, const std::vector<RejectRow>& rejects);

struct HotelTable {
    std::vector<std::string> feature_names;
    std::vector<HotelFeatureVector> hotels;
    std::vector<RejectRow> rejects;
};

// Header is `hotel_code,<feature_1>,...`; an empty cell is a missing value.
HotelTable parse_hotels(std::istream& in);
HotelTable parse_hotels_file(const std::filesystem::path& path);

void write_hotels(std::ostream& out, const std::vector<std::string>& feature_names,
                  const std::vector<HotelFeatureVector>& hotels);

enum class FeatureKind { Binary, Quantity };

// Per-feature z-scoring parameters fitted on the training hotel catalog.
// Constant columns are dropped at fit time so every stddev is positive.
struct FeatureCatalog {
    std::vector<std::string> names;
    std::vector<FeatureKind> kinds;
    std::vector<double> mean;
    std::vector<double> stddev;
    bool fitted = false;

    int size() const { return int(names.size()); }
    int index_of(std::string_view name) const;
};

FeatureCatalog make_catalog(std::vector<std::string> names);

struct PlausibilityBound {
    std::string feature;
    double lo;
    double hi;
};

// `name:lo:hi;name:lo:hi` with `-inf`/`inf` / empty endpoints allowed
std::vector<PlausibilityBound> parse_bounds(std::string_view text,
                                            const std::vector<std::string>& feature_names);

// Drops rows violating a plausibility bound, then imputes remaining missing
// cells with the column mean over the surviving rows. Idempotent.
std::vector<HotelFeatureVector> clean_hotels(const std::vector<HotelFeatureVector>& raw,
                                             const FeatureCatalog& catalog,
                                             const std::vector<PlausibilityBound>& bounds = {});

// Infers binary/quantity kinds, drops constant columns from the catalog and
// from the hotel vectors, and fits mean/stddev per surviving column.
void fit_catalog(FeatureCatalog& catalog, std::vector<HotelFeatureVector>& hotels);

void save_catalog(std::ostream& out, const FeatureCatalog& catalog);
FeatureCatalog load_catalog(std::istream& in);

// Sparse user x hotel visit-count matrix. Indices are assigned in first-
// appearance order, so construction is a pure function of record order.
struct InteractionMatrix {
    SparseMatrix counts;  // rows = users, cols = hotels, values >= 1
    std::vector<std::string> user_ids;
    std::vector<std::string> hotel_codes;
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> hotel_index;

    int users() const { return counts.rows; }
    int hotels() const { return counts.cols; }
    double count_sum() const;
};

InteractionMatrix build_interactions(const std::vector<ReservationRecord>& records);

}  // namespace hotelrec
