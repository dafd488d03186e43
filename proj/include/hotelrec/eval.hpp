#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hotelrec/als.hpp"
#include "hotelrec/catalog.hpp"
#include "hotelrec/content.hpp"
#include "hotelrec/hybrid.hpp"
#include "hotelrec/kmeans.hpp"
#include "hotelrec/pca.hpp"
#include "hotelrec/scenario.hpp"

namespace hotelrec {

struct SkipCounts {
    std::int64_t no_recommendation = 0;
    std::int64_t repeat_visit_excluded = 0;

    std::int64_t total() const { return no_recommendation + repeat_visit_excluded; }
};

struct EvalReport {
    int scenario = 0;
    EngineKind engine = EngineKind::ContentFull;
    std::map<int, double> recall_at;       // N -> percentage
    std::map<int, std::int64_t> hits_at;   // N -> hit count
    std::int64_t users_evaluated = 0;
    std::int64_t test_users = 0;
    SkipCounts skipped;
};

// One evaluation row: the user's recommendation list (nullptr when the
// engine could not produce one) and the single held-out hotel.
struct UserEval {
    std::string user_id;
    const std::vector<std::string>* list = nullptr;  // ordered hotel codes
    std::string heldout;
    bool repeat_visit_excluded = false;
};

struct RecallResult {
    double pct = 0.0;
    std::int64_t hits = 0;
    std::int64_t total = 0;  // all test users; Eq. reduces to hit-rate here
    SkipCounts skipped;
};

// 100 * hits / total. Users without a list and repeat-visit users cannot
// hit and are tallied under skipped; they stay in the denominator.
RecallResult recall_at_n(std::span<const UserEval> users, int n);

// Everything trained on one scenario's train split, ready to score users.
struct EngineStack {
    FeatureCatalog catalog;
    PcaModel pca;
    ClusterModel clusters;
    std::vector<std::vector<int>> cluster_members;
    Mat hotels_reduced;                      // rows align with content_hotel_codes
    std::vector<std::string> content_hotel_codes;
    std::unordered_map<std::string, int> content_hotel_index;
    InteractionMatrix interactions;          // train visit counts
    FactorModel factors;
    HybridSpec hybrid;
};

struct RecSlot {
    std::string hotel_code;
    double score = 0.0;
    Source source = Source::Content;
};

// Top-n slots for one user with scores and per-slot provenance. Throws on an
// unknown user; returns an empty vector when the engine has no basis for the
// user (cold profile).
std::vector<RecSlot> recommend_slots(const EngineStack& stack, EngineKind engine,
                                     const std::string& user_id, int n);

// Ordered top-n hotel codes for one user.
std::vector<std::string> topn_for_user(const EngineStack& stack, EngineKind engine,
                                       const std::string& user_id, int n);

std::vector<EvalReport> evaluate_scenario(int scenario_id, const SplitDataset& split,
                                          const EngineStack& stack, std::vector<int> ns);

// report.csv: scenario,engine,n,recall_pct,users,skipped
void emit_report_csv(std::ostream& out, const std::vector<EvalReport>& reports);
// Markdown tables, one block per engine family, recall as percentages
// with two decimals.
void emit_report_md(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace hotelrec
