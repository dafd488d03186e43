#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hotelrec/types.hpp"

namespace hotelrec {

enum class TestRule { LastPerUser, BorrowTest };

struct ScenarioSpec {
    int id = 1;
    int min_res = 3;
    int max_res = 10;
    TestRule rule = TestRule::LastPerUser;
    int borrow_from = 0;  // scenario id whose test set is reused
};

// The five canonical train/test splits (reservation-count range + test rule).
std::array<ScenarioSpec, 5> default_scenarios();
ScenarioSpec scenario_by_id(int id);

struct SplitStats {
    int hotel_count = 0;  // distinct hotels across train + test
    std::int64_t train_records = 0;
    std::int64_t train_users = 0;
    std::int64_t test_records = 0;
};

struct SplitDataset {
    std::vector<ReservationRecord> train;
    std::vector<ReservationRecord> test;
    SplitStats stats;
};

// Keeps exactly the records of users whose total count n satisfies
// min_res <= n <= max_res, in input order.
std::vector<ReservationRecord> filter_by_count(const std::vector<ReservationRecord>& records,
                                               int min_res, int max_res);

// Each user's date-maximal record goes to test (ties: later input row wins),
// everything else to train. Requires >= 2 records per user.
SplitDataset leave_last_out(const std::vector<ReservationRecord>& records);

SplitDataset materialize_scenario(const ScenarioSpec& spec,
                                  const std::vector<ReservationRecord>& records,
                                  const SplitDataset* prior = nullptr);

SplitStats compute_split_stats(const std::vector<ReservationRecord>& train,
                               const std::vector<ReservationRecord>& test);

}  // namespace hotelrec
