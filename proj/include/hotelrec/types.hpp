#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hotelrec {

// Bad or missing input data; the CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (NaN loss, divergence); exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or usage; exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;
    // days since 1970-01-01, used for ordering and arithmetic
    std::int64_t serial = 0;

    friend bool operator==(const Date&, const Date&) = default;
    friend auto operator<=>(const Date& a, const Date& b) { return a.serial <=> b.serial; }
};

std::int64_t days_from_civil(int y, int m, int d);
Date date_from_serial(std::int64_t serial);

// Strict ISO 8601 calendar date (YYYY-MM-DD); rejects impossible dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);

struct ReservationRecord {
    std::string user_id;
    std::string hotel_code;
    Date date;
    // original input row (0-based, data rows only); gives duplicate
    // (user,hotel,date) rows a stable identity and breaks date ties
    std::int64_t row = -1;
};

struct HotelFeatureVector {
    std::string hotel_code;
    // NaN marks a missing cell until cleaning
    std::vector<double> features;
};

struct RankedItem {
    std::string hotel_code;
    double score = 0.0;
};

// Engine output: scores non-increasing, ties resolved by hotel index.
struct RankedList {
    std::string user_id;
    std::vector<RankedItem> items;
};

enum class Source { Content, Cf };

std::string_view source_name(Source s);

struct HybridSlot {
    std::string hotel_code;
    double score = 0.0;
    Source source = Source::Content;
};

// Interleaved list; scores keep each source's own scale, so they are
// not monotone across slots.
struct HybridList {
    std::string user_id;
    std::vector<HybridSlot> slots;
};

enum class EngineKind { ContentFull, ContentCluster, Cf, HybridFull, HybridCluster };

std::string_view engine_name(EngineKind e);
std::optional<EngineKind> engine_from_name(std::string_view name);

inline constexpr EngineKind kAllEngines[] = {
    EngineKind::ContentFull, EngineKind::ContentCluster, EngineKind::Cf,
    EngineKind::HybridFull, EngineKind::HybridCluster};

}  // namespace hotelrec
