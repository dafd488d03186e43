#include "hotelrec/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

namespace hotelrec {

RecallResult recall_at_n(std::span<const UserEval> users, int n) {
    if (users.empty()) throw DataError("recall on an empty test set");
    RecallResult res;
    res.total = std::int64_t(users.size());
    for (const auto& u : users) {
        if (u.repeat_visit_excluded) {
            ++res.skipped.repeat_visit_excluded;
            continue;
        }
        if (u.list == nullptr || u.list->empty()) {
            ++res.skipped.no_recommendation;
            continue;
        }
        const std::size_t limit = std::min(u.list->size(), std::size_t(std::max(n, 0)));
        for (std::size_t i = 0; i < limit; ++i) {
            if ((*u.list)[i] == u.heldout) {
                ++res.hits;
                break;
            }
        }
    }
    res.pct = 100.0 * double(res.hits) / double(res.total);
    return res;
}

namespace {

struct UserContext {
    bool known = false;
    std::vector<int> train_rows;               // content hotel rows for the profile
    std::unordered_set<int> exclude_content;   // content hotel row space
    std::unordered_set<int> exclude_cf;        // interaction matrix column space
    std::unordered_set<std::string> train_codes;
    std::vector<double> profile;               // empty when no cataloged train hotel
};

UserContext make_user_context(const EngineStack& stack, const std::string& user_id) {
    UserContext ctx;
    const auto it = stack.interactions.user_index.find(user_id);
    if (it == stack.interactions.user_index.end()) return ctx;
    ctx.known = true;
    const auto& counts = stack.interactions.counts;
    const int row = it->second;
    for (std::int64_t p = counts.row_ptr[row]; p < counts.row_ptr[row + 1]; ++p) {
        const int hotel_col = counts.col[p];
        ctx.exclude_cf.insert(hotel_col);
        const std::string& code = stack.interactions.hotel_codes[std::size_t(hotel_col)];
        ctx.train_codes.insert(code);
        const auto cit = stack.content_hotel_index.find(code);
        if (cit != stack.content_hotel_index.end()) {
            ctx.train_rows.push_back(cit->second);
            ctx.exclude_content.insert(cit->second);
        }
    }
    if (!ctx.train_rows.empty())
        ctx.profile = build_profile(stack.hotels_reduced, ctx.train_rows);
    return ctx;
}

RankedList content_list(const EngineStack& stack, const UserContext& ctx,
                        const std::string& user_id, RetrievalMode mode, int n) {
    RankedList list;
    list.user_id = user_id;
    if (ctx.profile.empty()) return list;  // cold profile
    ContentQuery q;
    q.profile = ctx.profile;
    q.hotels = &stack.hotels_reduced;
    q.hotel_codes = &stack.content_hotel_codes;
    q.clusters = &stack.clusters;
    q.cluster_members = &stack.cluster_members;
    q.exclude = &ctx.exclude_content;
    q.n = n;
    auto res = recommend_content(q, mode);
    res.list.user_id = user_id;
    return std::move(res.list);
}

std::vector<RecSlot> to_slots(const RankedList& list, Source source) {
    std::vector<RecSlot> slots;
    slots.reserve(list.items.size());
    for (const auto& it : list.items) slots.push_back({it.hotel_code, it.score, source});
    return slots;
}

std::vector<RecSlot> to_slots(const HybridList& list) {
    std::vector<RecSlot> slots;
    slots.reserve(list.slots.size());
    for (const auto& s : list.slots) slots.push_back({s.hotel_code, s.score, s.source});
    return slots;
}

std::vector<RecSlot> slots_for(const EngineStack& stack, const UserContext& ctx,
                               EngineKind engine, const std::string& user_id, int n) {
    if (!ctx.known) return {};
    switch (engine) {
        case EngineKind::ContentFull:
            return to_slots(content_list(stack, ctx, user_id, RetrievalMode::FullScan, n),
                            Source::Content);
        case EngineKind::ContentCluster:
            return to_slots(content_list(stack, ctx, user_id, RetrievalMode::Clustered, n),
                            Source::Content);
        case EngineKind::Cf:
            return to_slots(recommend_cf(stack.factors, stack.interactions, user_id,
                                         ctx.exclude_cf, n),
                            Source::Cf);
        case EngineKind::HybridFull:
        case EngineKind::HybridCluster: {
            const auto mode = engine == EngineKind::HybridFull ? RetrievalMode::FullScan
                                                               : RetrievalMode::Clustered;
            const RankedList content = content_list(stack, ctx, user_id, mode, n);
            const RankedList cf =
                recommend_cf(stack.factors, stack.interactions, user_id, ctx.exclude_cf, n);
            HybridSpec spec = stack.hybrid;
            spec.n = n;
            return to_slots(interleave(content, cf, spec));
        }
    }
    return {};
}

}  // namespace

std::vector<RecSlot> recommend_slots(const EngineStack& stack, EngineKind engine,
                                     const std::string& user_id, int n) {
    const UserContext ctx = make_user_context(stack, user_id);
    if (!ctx.known) throw DataError("unknown user: " + user_id);
    return slots_for(stack, ctx, engine, user_id, n);
}

std::vector<std::string> topn_for_user(const EngineStack& stack, EngineKind engine,
                                       const std::string& user_id, int n) {
    const auto slots = recommend_slots(stack, engine, user_id, n);
    std::vector<std::string> codes;
    codes.reserve(slots.size());
    for (const auto& s : slots) codes.push_back(s.hotel_code);
    return codes;
}

std::vector<EvalReport> evaluate_scenario(int scenario_id, const SplitDataset& split,
                                          const EngineStack& stack, std::vector<int> ns) {
    if (split.test.empty()) throw DataError("scenario has an empty test set");
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const int nt = int(split.test.size());
    // lists[engine][n_index][user]; empty vector = no recommendation
    std::vector<std::vector<std::vector<std::vector<std::string>>>> lists(std::size(kAllEngines));
    for (auto& per_engine : lists)
        per_engine.assign(ns.size(), std::vector<std::vector<std::string>>(std::size_t(nt)));
    std::vector<char> repeat_flag(std::size_t(nt), 0);

#pragma omp parallel for schedule(dynamic, 16)
    for (int t = 0; t < nt; ++t) {
        const auto& rec = split.test[std::size_t(t)];
        const UserContext ctx = make_user_context(stack, rec.user_id);
        if (!ctx.known) continue;  // stays "no list"
        if (ctx.train_codes.contains(rec.hotel_code)) {
            // held-out hotel is hidden by the exclusion rule; surfaced as a
            // skip instead of silently biasing recall
            repeat_flag[std::size_t(t)] = 1;
            continue;
        }
        for (std::size_t e = 0; e < std::size(kAllEngines); ++e) {
            const bool hybrid = kAllEngines[e] == EngineKind::HybridFull ||
                                kAllEngines[e] == EngineKind::HybridCluster;
            // A pure engine's ranking is prefix-consistent, so one list at
            // max n serves every cutoff; hybrids honor the odd-slot rule per
            // list length and are built once per n.
            for (std::size_t ni = 0; ni < ns.size(); ++ni) {
                if (!hybrid && ni > 0) break;
                const int n = hybrid ? ns[ni] : ns.back();
                const auto slots = slots_for(stack, ctx, kAllEngines[e], rec.user_id, n);
                auto& dst = lists[e][ni][std::size_t(t)];
                dst.reserve(slots.size());
                for (const auto& s : slots) dst.push_back(s.hotel_code);
            }
        }
    }

    std::vector<EvalReport> reports;
    for (std::size_t e = 0; e < std::size(kAllEngines); ++e) {
        EvalReport report;
        report.scenario = scenario_id;
        report.engine = kAllEngines[e];
        report.test_users = nt;
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            // pure engines store one list (computed at max n) and reuse it
            const bool hybrid = kAllEngines[e] == EngineKind::HybridFull ||
                                kAllEngines[e] == EngineKind::HybridCluster;
            const auto& source = lists[e][hybrid ? ni : 0];
            std::vector<UserEval> rows(static_cast<std::size_t>(nt));
            for (int t = 0; t < nt; ++t) {
                auto& row = rows[std::size_t(t)];
                row.user_id = split.test[std::size_t(t)].user_id;
                row.heldout = split.test[std::size_t(t)].hotel_code;
                row.repeat_visit_excluded = repeat_flag[std::size_t(t)] != 0;
                row.list = &source[std::size_t(t)];
            }
            const auto res = recall_at_n(rows, ns[ni]);
            report.recall_at[ns[ni]] = res.pct;
            report.hits_at[ns[ni]] = res.hits;
            report.skipped = res.skipped;
            report.users_evaluated = res.total - res.skipped.total();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

namespace {

std::string pct2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void emit_report_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw DataError("no evaluation reports to emit");
    out << "scenario,engine,n,recall_pct,users,skipped\n";
    for (const auto& r : reports)
        for (const auto& [n, pct] : r.recall_at)
            out << r.scenario << ',' << engine_name(r.engine) << ',' << n << ',' << pct2(pct)
                << ',' << r.users_evaluated << ',' << r.skipped.total() << '\n';
}

void emit_report_md(std::ostream& out, const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw DataError("no evaluation reports to emit");
    std::set<int> scenarios, ns;
    for (const auto& r : reports) {
        scenarios.insert(r.scenario);
        for (const auto& [n, pct] : r.recall_at) ns.insert(n);
    }
    auto find_report = [&](int scenario, EngineKind e) -> const EvalReport* {
        for (const auto& r : reports)
            if (r.scenario == scenario && r.engine == e) return &r;
        return nullptr;
    };
    auto table = [&](const char* title, std::vector<std::pair<const char*, EngineKind>> columns) {
        out << "## " << title << "\n\n|Scenario|";
        for (const auto& [label, engine] : columns)
            for (int n : ns) out << label << "Top" << n << '|';
        out << "\n|---|";
        for (std::size_t i = 0; i < columns.size() * ns.size(); ++i) out << "---|";
        out << '\n';
        for (int s : scenarios) {
            out << '|' << s << '|';
            for (const auto& [label, engine] : columns) {
                const EvalReport* r = find_report(s, engine);
                for (int n : ns) {
                    if (r && r->recall_at.contains(n))
                        out << pct2(r->recall_at.at(n));
                    else
                        out << "-";
                    out << '|';
                }
            }
            out << '\n';
        }
        out << '\n';
    };
    out << "# Recall by scenario (%)\n\n";
    table("Content-based filtering",
          {{"cluster ", EngineKind::ContentCluster}, {"full ", EngineKind::ContentFull}});
    table("Collaborative filtering", {{"", EngineKind::Cf}});
    table("Hybrid",
          {{"cluster ", EngineKind::HybridCluster}, {"full ", EngineKind::HybridFull}});
}

}  // namespace hotelrec
