#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "hotelrec/scenario.hpp"
#include "hotelrec/synth.hpp"

using namespace hotelrec;

namespace {

ReservationRecord rec(const std::string& user, const std::string& hotel, const std::string& date,
                      std::int64_t row) {
    return {user, hotel, *parse_date(date), row};
}

std::vector<ReservationRecord> user_counts_corpus() {
    // u1: 2 records, u2: 5, u3: 12
    std::vector<ReservationRecord> records;
    std::int64_t row = 0;
    for (int i = 0; i < 2; ++i) records.push_back(rec("u1", "hA", "2018-01-0" + std::to_string(i + 1), row++));
    for (int i = 0; i < 5; ++i) records.push_back(rec("u2", "hB", "2018-02-0" + std::to_string(i + 1), row++));
    for (int i = 0; i < 12; ++i) records.push_back(rec("u3", "hC", "2018-03-" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1), row++));
    return records;
}

std::multiset<std::int64_t> row_multiset(const std::vector<ReservationRecord>& records) {
    std::multiset<std::int64_t> out;
    for (const auto& r : records) out.insert(r.row);
    return out;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("count filter keeps only users inside the range") {
    const auto records = user_counts_corpus();
    auto kept = filter_by_count(records, 3, 10);
    CHECK(kept.size() == 5);
    for (const auto& r : kept) CHECK(r.user_id == "u2");

    auto wider = filter_by_count(records, 2, 10);
    std::set<std::string> users;
    for (const auto& r : wider) users.insert(r.user_id);
    CHECK(users == std::set<std::string>{"u1", "u2"});
}

TEST_CASE("count filter against an independent per-user tally on a synthetic corpus") {
    SynthSpec spec;
    spec.users = 400;
    spec.hotels = 50;
    spec.seed = 21;
    const auto corpus = generate(spec);
    const auto kept = filter_by_count(corpus.records, 8, 10);

    std::unordered_map<std::string, int> tally;
    for (const auto& r : corpus.records) ++tally[r.user_id];
    std::set<std::string> expect_users;
    std::size_t expect_records = 0;
    for (const auto& [user, n] : tally)
        if (n >= 8 && n <= 10) {
            expect_users.insert(user);
            expect_records += std::size_t(n);
        }
    std::set<std::string> got_users;
    for (const auto& r : kept) got_users.insert(r.user_id);
    CHECK(got_users == expect_users);
    CHECK(kept.size() == expect_records);
}

TEST_CASE("leave-last-out holds back the date-maximal record") {
    std::vector<ReservationRecord> records = {
        rec("u1", "hA", "2018-01-05", 0),
        rec("u1", "hB", "2018-03-05", 1),
    };
    auto split = leave_last_out(records);
    REQUIRE(split.train.size() == 1);
    REQUIRE(split.test.size() == 1);
    CHECK(split.train[0].hotel_code == "hA");
    CHECK(split.test[0].hotel_code == "hB");
}

TEST_CASE("date ties send the later input record to test") {
    std::vector<ReservationRecord> records = {
        rec("u1", "hA", "2018-03-01", 0),
        rec("u1", "hB", "2018-03-01", 1),
    };
    auto split = leave_last_out(records);
    CHECK(split.test[0].hotel_code == "hB");
    CHECK(split.train[0].hotel_code == "hA");
}

TEST_CASE("a single-record user breaks the precondition") {
    std::vector<ReservationRecord> records = {rec("u1", "hA", "2018-01-01", 0)};
    CHECK_THROWS_AS(leave_last_out(records), DataError);
}

TEST_CASE("test size equals unique user count on a large synthetic corpus") {
    SynthSpec spec;
    spec.users = 5000;
    spec.hotels = 120;
    spec.seed = 5;
    const auto corpus = generate(spec);
    auto split = leave_last_out(corpus.records);
    std::set<std::string> users;
    for (const auto& r : corpus.records) users.insert(r.user_id);
    CHECK(split.test.size() == users.size());
    // one test record per user, date-maximal among that user's records
    std::unordered_map<std::string, std::int64_t> max_date;
    for (const auto& r : corpus.records) {
        auto [it, fresh] = max_date.try_emplace(r.user_id, r.date.serial);
        if (!fresh) it->second = std::max(it->second, r.date.serial);
    }
    for (const auto& r : split.test) CHECK(r.date.serial == max_date.at(r.user_id));
}

TEST_CASE("scenario 1 uses the 3..10 range with last-per-user test") {
    const auto spec = scenario_by_id(1);
    CHECK(spec.min_res == 3);
    CHECK(spec.max_res == 10);
    CHECK(spec.rule == TestRule::LastPerUser);

    SynthSpec synth_spec;
    synth_spec.users = 300;
    synth_spec.hotels = 40;
    synth_spec.seed = 9;
    const auto corpus = generate(synth_spec);
    auto split = materialize_scenario(spec, corpus.records);
    std::unordered_map<std::string, int> tally;
    for (const auto& r : corpus.records) ++tally[r.user_id];
    for (const auto& r : split.train) {
        CHECK(tally.at(r.user_id) >= 3);
        CHECK(tally.at(r.user_id) <= 10);
    }
    CHECK(split.stats.test_records == split.stats.train_users);
}

TEST_CASE("scenario 3 borrows scenario 1's test set while training on the 2..10 range") {
    SynthSpec synth_spec;
    synth_spec.users = 500;
    synth_spec.hotels = 60;
    synth_spec.seed = 31;
    const auto corpus = generate(synth_spec);

    auto s1 = materialize_scenario(scenario_by_id(1), corpus.records);
    auto s3 = materialize_scenario(scenario_by_id(3), corpus.records, &s1);

    CHECK(s3.test.size() == s1.test.size());
    CHECK(row_multiset(s3.test) == row_multiset(s1.test));

    std::unordered_map<std::string, int> tally;
    for (const auto& r : corpus.records) ++tally[r.user_id];
    std::set<std::string> train_users;
    for (const auto& r : s3.train) {
        train_users.insert(r.user_id);
        CHECK(tally.at(r.user_id) >= 2);
        CHECK(tally.at(r.user_id) <= 10);
    }
    // the 2-reservation crowd joins training only
    bool has_two_res_user = false;
    for (const auto& u : train_users)
        if (tally.at(u) == 2) has_two_res_user = true;
    CHECK(has_two_res_user);
}

TEST_CASE("scenario 3 without a materialized prior is an error") {
    SynthSpec synth_spec;
    synth_spec.users = 50;
    synth_spec.hotels = 10;
    synth_spec.seed = 2;
    const auto corpus = generate(synth_spec);
    CHECK_THROWS_AS(materialize_scenario(scenario_by_id(3), corpus.records), DataError);
}

TEST_CASE("scenario 5 retains exactly the 8..10 reservation users") {
    SynthSpec synth_spec;
    synth_spec.users = 400;
    synth_spec.hotels = 50;
    synth_spec.seed = 13;
    const auto corpus = generate(synth_spec);
    auto split = materialize_scenario(scenario_by_id(5), corpus.records);

    std::unordered_map<std::string, int> tally;
    for (const auto& r : corpus.records) ++tally[r.user_id];
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& r : split.train) ++seen[r.user_id];
    for (const auto& r : split.test) ++seen[r.user_id];
    for (const auto& [user, n] : seen) {
        CHECK(tally.at(user) >= 8);
        CHECK(tally.at(user) <= 10);
        CHECK(std::size_t(tally.at(user)) == n);  // nothing lost within a retained user
    }
}

TEST_CASE("train plus test reconstructs the filtered multiset for every scenario") {
    SynthSpec synth_spec;
    synth_spec.users = 600;
    synth_spec.hotels = 80;
    synth_spec.seed = 44;
    const auto corpus = generate(synth_spec);

    SplitDataset s1;
    for (const auto& spec : default_scenarios()) {
        const auto filtered = filter_by_count(corpus.records, spec.min_res, spec.max_res);
        auto split = materialize_scenario(spec, corpus.records, spec.id == 3 ? &s1 : nullptr);
        if (spec.id == 1) s1 = split;

        auto joined = row_multiset(split.train);
        for (const auto& r : split.test) joined.insert(r.row);
        CHECK(joined == row_multiset(filtered));
        CHECK(split.train.size() + split.test.size() == filtered.size());
    }
}

TEST_CASE("widening the range never drops a retained user") {
    SynthSpec synth_spec;
    synth_spec.users = 300;
    synth_spec.hotels = 30;
    synth_spec.seed = 8;
    const auto corpus = generate(synth_spec);
    auto narrow = filter_by_count(corpus.records, 4, 7);
    auto wide = filter_by_count(corpus.records, 3, 9);
    std::set<std::string> narrow_users, wide_users;
    for (const auto& r : narrow) narrow_users.insert(r.user_id);
    for (const auto& r : wide) wide_users.insert(r.user_id);
    CHECK(std::includes(wide_users.begin(), wide_users.end(), narrow_users.begin(),
                        narrow_users.end()));
}

}  // TEST_SUITE
