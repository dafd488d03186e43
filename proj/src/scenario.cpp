#include "hotelrec/scenario.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace hotelrec {

std::array<ScenarioSpec, 5> default_scenarios() {
    return {{
        {1, 3, 10, TestRule::LastPerUser, 0},
        {2, 2, 10, TestRule::LastPerUser, 0},
        {3, 2, 10, TestRule::BorrowTest, 1},
        {4, 3, 5, TestRule::LastPerUser, 0},
        {5, 8, 10, TestRule::LastPerUser, 0},
    }};
}

ScenarioSpec scenario_by_id(int id) {
    for (const auto& s : default_scenarios())
        if (s.id == id) return s;
    throw ConfigError("scenario id must be 1..5, got " + std::to_string(id));
}

std::vector<ReservationRecord> filter_by_count(const std::vector<ReservationRecord>& records,
                                               int min_res, int max_res) {
    if (min_res < 2) throw ConfigError("min_res must be >= 2");
    if (max_res < min_res) throw ConfigError("max_res must be >= min_res");
    std::unordered_map<std::string, int> counts;
    for (const auto& r : records) ++counts[r.user_id];
    std::vector<ReservationRecord> kept;
    for (const auto& r : records) {
        const int n = counts[r.user_id];
        if (n >= min_res && n <= max_res) kept.push_back(r);
    }
    if (kept.empty())
        throw DataError("no users with reservation count in [" + std::to_string(min_res) + "," +
                        std::to_string(max_res) + "]");
    return kept;
}

SplitDataset leave_last_out(const std::vector<ReservationRecord>& records) {
    // per user: index of the date-maximal record, later input row wins ties
    std::unordered_map<std::string, std::size_t> last;
    std::unordered_map<std::string, int> counts;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        ++counts[r.user_id];
        auto [it, fresh] = last.try_emplace(r.user_id, i);
        if (!fresh && records[it->second].date.serial <= r.date.serial) it->second = i;
    }
    for (const auto& [user, n] : counts)
        if (n < 2) throw DataError("user " + user + " has a single reservation; cannot hold one out");

    SplitDataset split;
    split.train.reserve(records.size() - counts.size());
    split.test.reserve(counts.size());
    std::unordered_set<std::size_t> test_idx;
    test_idx.reserve(counts.size());
    for (const auto& [user, idx] : last) test_idx.insert(idx);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (test_idx.contains(i))
            split.test.push_back(records[i]);
        else
            split.train.push_back(records[i]);
    }
    split.stats = compute_split_stats(split.train, split.test);
    return split;
}

SplitDataset materialize_scenario(const ScenarioSpec& spec,
                                  const std::vector<ReservationRecord>& records,
                                  const SplitDataset* prior) {
    auto filtered = filter_by_count(records, spec.min_res, spec.max_res);
    if (spec.rule == TestRule::LastPerUser) return leave_last_out(filtered);

    if (prior == nullptr)
        throw DataError("scenario " + std::to_string(spec.id) + " borrows scenario " +
                        std::to_string(spec.borrow_from) + "'s test set, which is not materialized");
    SplitDataset split;
    split.test = prior->test;
    std::unordered_set<std::int64_t> test_rows;
    test_rows.reserve(split.test.size());
    for (const auto& r : split.test) test_rows.insert(r.row);
    split.train.reserve(filtered.size() - split.test.size());
    for (const auto& r : filtered)
        if (!test_rows.contains(r.row)) split.train.push_back(r);
    split.stats = compute_split_stats(split.train, split.test);
    return split;
}

SplitStats compute_split_stats(const std::vector<ReservationRecord>& train,
                               const std::vector<ReservationRecord>& test) {
    SplitStats s;
    std::unordered_set<std::string> hotels, users;
    for (const auto& r : train) {
        hotels.insert(r.hotel_code);
        users.insert(r.user_id);
    }
    s.train_users = std::int64_t(users.size());
    for (const auto& r : test) hotels.insert(r.hotel_code);
    s.hotel_count = int(hotels.size());
    s.train_records = std::int64_t(train.size());
    s.test_records = std::int64_t(test.size());
    return s;
}

}  // namespace hotelrec
