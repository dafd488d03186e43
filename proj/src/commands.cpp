#include "hotelrec/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "hotelrec/csv.hpp"
#include "hotelrec/synth.hpp"

namespace hotelrec {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

ScenarioSpec scenario_spec_for(const RunConfig& config, int id) {
    ScenarioSpec spec = scenario_by_id(id);
    if (config.scenario_min_res) spec.min_res = *config.scenario_min_res;
    if (config.scenario_max_res) spec.max_res = *config.scenario_max_res;
    if (spec.min_res < 2 || spec.max_res < spec.min_res)
        throw ConfigError("scenario range must satisfy 2 <= min_res <= max_res");
    return spec;
}

// Drop rows and columns the fitted catalog excluded, in catalog order.
std::vector<HotelFeatureVector> select_catalog_columns(
    const std::vector<HotelFeatureVector>& cleaned, const std::vector<std::string>& table_names,
    const FeatureCatalog& catalog) {
    std::vector<int> col_of;
    col_of.reserve(catalog.names.size());
    for (const auto& name : catalog.names) {
        const auto it = std::find(table_names.begin(), table_names.end(), name);
        if (it == table_names.end())
            throw DataError("hotels file lacks catalog feature: " + name);
        col_of.push_back(int(it - table_names.begin()));
    }
    std::vector<HotelFeatureVector> out;
    out.reserve(cleaned.size());
    for (const auto& h : cleaned) {
        HotelFeatureVector v;
        v.hotel_code = h.hotel_code;
        v.features.reserve(col_of.size());
        for (int c : col_of) v.features.push_back(h.features[std::size_t(c)]);
        out.push_back(std::move(v));
    }
    return out;
}

void finish_content_side(EngineStack& stack, const std::vector<HotelFeatureVector>& normalized,
                         const RunConfig& config, bool fit_models) {
    if (fit_models) {
        stack.pca = fit_pca(normalized, config.pca_dims);
    }
    stack.hotels_reduced = project_all(stack.pca, normalized);
    stack.content_hotel_codes.clear();
    stack.content_hotel_index.clear();
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        stack.content_hotel_codes.push_back(normalized[i].hotel_code);
        stack.content_hotel_index.emplace(normalized[i].hotel_code, int(i));
    }
    if (fit_models)
        stack.clusters = fit_kmeans(stack.hotels_reduced, config.kmeans_k,
                                    config.kmeans_max_iter, config.content_seed);
    if (int(stack.clusters.assignment.size()) != stack.hotels_reduced.rows)
        throw DataError("cluster model does not match the hotel catalog; retrain");
    stack.cluster_members = stack.clusters.members();
    stack.hybrid = config.hybrid;
}

SplitDataset load_split(const RunConfig& config, int scenario_id) {
    const fs::path dir = scenario_dir(config, scenario_id);
    if (!fs::exists(dir / "train.csv") || !fs::exists(dir / "test.csv"))
        throw DataError("scenario " + std::to_string(scenario_id) + " is not materialized under " +
                        dir.string() + "; run split first");
    SplitDataset split;
    split.train = parse_reservations_file(dir / "train.csv").records;
    split.test = parse_reservations_file(dir / "test.csv").records;
    split.stats = compute_split_stats(split.train, split.test);
    return split;
}

void write_split(const RunConfig& config, int scenario_id, const SplitDataset& split) {
    const fs::path dir = scenario_dir(config, scenario_id);
    {
        auto out = open_out(dir / "train.csv");
        write_reservations(out, split.train);
    }
    {
        auto out = open_out(dir / "test.csv");
        write_reservations(out, split.test);
    }
    nlohmann::json stats;
    stats["scenario"] = scenario_id;
    stats["hotel_count"] = split.stats.hotel_count;
    stats["train_records"] = split.stats.train_records;
    stats["train_users"] = split.stats.train_users;
    stats["test_records"] = split.stats.test_records;
    auto out = open_out(dir / "stats.json");
    out << stats.dump(2) << '\n';
}

}  // namespace

fs::path scenario_dir(const RunConfig& config, int scenario_id) {
    return config.out_dir / ("scenario" + std::to_string(scenario_id));
}

EngineStack train_engine_stack(const std::vector<ReservationRecord>& train,
                               const HotelTable& hotel_table, const RunConfig& config,
                               std::vector<SweepLoss>* trace_out, int* singular_solves_out) {
    EngineStack stack;
    stack.catalog = make_catalog(hotel_table.feature_names);
    const auto bounds = parse_bounds(config.clean_bounds, hotel_table.feature_names);
    auto cleaned = clean_hotels(hotel_table.hotels, stack.catalog, bounds);
    fit_catalog(stack.catalog, cleaned);
    const auto normalized = normalize_features(cleaned, stack.catalog);
    finish_content_side(stack, normalized, config, /*fit_models=*/true);

    stack.interactions = build_interactions(train);
    auto fit = fit_als(stack.interactions.counts, config.als);
    stack.factors = std::move(fit.model);
    if (trace_out) *trace_out = std::move(fit.trace);
    if (singular_solves_out) *singular_solves_out = fit.singular_solves;
    return stack;
}

EngineStack load_engine_stack(const RunConfig& config, int scenario_id) {
    const fs::path models = scenario_dir(config, scenario_id) / "models";
    if (!fs::exists(models))
        throw DataError("models for scenario " + std::to_string(scenario_id) +
                        " not found under " + models.string() + "; run train first");

    EngineStack stack;
    {
        auto in = open_in(models / "catalog.csv");
        stack.catalog = load_catalog(in);
    }
    {
        auto in = open_in(models / "pca.csv");
        stack.pca = load_pca(in);
    }
    {
        auto in = open_in(models / "kmeans.csv");
        stack.clusters = load_kmeans(in);
    }

    const auto table = parse_hotels_file(config.out_dir / "hotels.csv");
    const auto bounds = parse_bounds(config.clean_bounds, table.feature_names);
    auto cleaned = clean_hotels(table.hotels, make_catalog(table.feature_names), bounds);
    const auto selected = select_catalog_columns(cleaned, table.feature_names, stack.catalog);
    const auto normalized = normalize_features(selected, stack.catalog);
    finish_content_side(stack, normalized, config, /*fit_models=*/false);

    const auto train = parse_reservations_file(scenario_dir(config, scenario_id) / "train.csv");
    stack.interactions = build_interactions(train.records);

    auto in = open_in(models / "als_model.bin");
    auto loaded = load_als(in);
    if (loaded.user_ids != stack.interactions.user_ids ||
        loaded.hotel_codes != stack.interactions.hotel_codes)
        throw DataError("als model does not match the train split; retrain scenario " +
                        std::to_string(scenario_id));
    stack.factors = std::move(loaded.model);
    stack.hybrid = config.hybrid;
    return stack;
}

void cmd_synth(const RunConfig& config) {
    const auto out = generate(config.synth);
    write_synth(out, config.out_dir);
    std::cout << "synth: " << out.records.size() << " reservations, " << out.hotels.size()
              << " hotels -> " << config.out_dir.string() << '\n';
}

void cmd_split(const RunConfig& config) {
    const auto parsed = parse_reservations_file(config.out_dir / "reservations.csv");
    {
        auto out = open_out(config.out_dir / "rejects.csv");
        write_rejects(out, parsed.rejects);
    }
    const ScenarioSpec spec = scenario_spec_for(config, config.scenario_id);

    SplitDataset prior;
    const SplitDataset* prior_ptr = nullptr;
    if (spec.rule == TestRule::BorrowTest) {
        const fs::path prior_dir = scenario_dir(config, spec.borrow_from);
        if (!fs::exists(prior_dir / "test.csv"))
            throw DataError("scenario " + std::to_string(spec.id) + " reuses scenario " +
                            std::to_string(spec.borrow_from) + "'s test set; materialize it first");
        // rebuilt from the same reservations file so record identities align
        prior = materialize_scenario(scenario_by_id(spec.borrow_from), parsed.records);
        prior_ptr = &prior;
    }

    const SplitDataset split = materialize_scenario(spec, parsed.records, prior_ptr);
    write_split(config, config.scenario_id, split);
    std::cout << "split scenario " << config.scenario_id << ": hotels=" << split.stats.hotel_count
              << " train_records=" << split.stats.train_records
              << " train_users=" << split.stats.train_users
              << " test_records=" << split.stats.test_records << '\n';
}

void cmd_train(const RunConfig& config) {
    const auto split = load_split(config, config.scenario_id);
    const auto table = parse_hotels_file(config.out_dir / "hotels.csv");

    std::vector<SweepLoss> trace;
    int singular = 0;
    const EngineStack stack = train_engine_stack(split.train, table, config, &trace, &singular);

    const fs::path models = scenario_dir(config, config.scenario_id) / "models";
    {
        auto out = open_out(models / "catalog.csv");
        save_catalog(out, stack.catalog);
    }
    {
        auto out = open_out(models / "pca.csv");
        save_pca(out, stack.pca);
    }
    {
        auto out = open_out(models / "kmeans.csv");
        save_kmeans(out, stack.clusters);
    }
    {
        auto out = open_out(models / "als_model.bin");
        save_als(out, stack.factors, stack.interactions.user_ids, stack.interactions.hotel_codes);
    }
    {
        auto out = open_out(models / "loss_trace.csv");
        write_loss_trace(out, trace);
    }
    if (singular > 0)
        std::cerr << "warning: " << singular << " singular row systems solved via pseudo-inverse\n";
    std::cout << "train scenario " << config.scenario_id << ": k=" << stack.factors.k
              << " lambda=" << stack.factors.config.lambda << " final_loss="
              << (trace.empty() ? 0.0 : trace.back().loss) << " models -> " << models.string()
              << '\n';
}

void cmd_recommend(const RunConfig& config, const std::vector<std::string>& users,
                   bool all_users) {
    const EngineStack stack = load_engine_stack(config, config.scenario_id);

    std::vector<std::string> targets = users;
    if (all_users) targets = stack.interactions.user_ids;
    if (targets.empty()) throw ConfigError("recommend needs user ids or --all");

    std::vector<EngineKind> engines;
    if (config.recommend_engines.empty()) {
        for (EngineKind e : kAllEngines) {
            if (config.content_mode == "full" &&
                (e == EngineKind::ContentCluster || e == EngineKind::HybridCluster))
                continue;
            if (config.content_mode == "cluster" &&
                (e == EngineKind::ContentFull || e == EngineKind::HybridFull))
                continue;
            engines.push_back(e);
        }
    } else {
        for (const auto& name : config.recommend_engines) engines.push_back(*engine_from_name(name));
    }

    auto out = open_out(config.out_dir / "recommendations.csv");
    out << "user_id,rank,hotel_code,score,source,engine\n";
    int warnings = 0;
    for (const EngineKind engine : engines) {
        for (const auto& user : targets) {
            try {
                const auto slots = recommend_slots(stack, engine, user, config.recommend_n);
                if (slots.empty()) {
                    // cold profile, or the nearest cluster was exhausted
                    out << user << ",0,,0,error:no-recommendation," << engine_name(engine) << '\n';
                    ++warnings;
                    continue;
                }
                int rank = 1;
                for (const auto& s : slots)
                    out << user << ',' << rank++ << ',' << s.hotel_code << ','
                        << csv::format_double(s.score) << ',' << source_name(s.source) << ','
                        << engine_name(engine) << '\n';
            } catch (const DataError&) {
                out << user << ",0,,0,error:unknown-user," << engine_name(engine) << '\n';
                ++warnings;
            }
        }
    }
    if (warnings > 0)
        std::cerr << "warning: " << warnings << " user/engine pairs produced no recommendations\n";
    std::cout << "recommend: engines=" << engines.size() << " users=" << targets.size() << " -> "
              << (config.out_dir / "recommendations.csv").string() << '\n';
}

void cmd_evaluate(const RunConfig& config) {
    std::vector<EvalReport> reports;
    for (const auto& spec : default_scenarios()) {
        const auto split = load_split(config, spec.id);
        const EngineStack stack = load_engine_stack(config, spec.id);
        auto scenario_reports = evaluate_scenario(spec.id, split, stack, config.eval_ns);
        reports.insert(reports.end(), std::make_move_iterator(scenario_reports.begin()),
                       std::make_move_iterator(scenario_reports.end()));
    }
    {
        auto out = open_out(config.out_dir / "report.csv");
        emit_report_csv(out, reports);
    }
    {
        auto out = open_out(config.out_dir / "report.md");
        emit_report_md(out, reports);
    }
    std::cout << "evaluate: " << reports.size() << " engine reports -> "
              << (config.out_dir / "report.csv").string() << '\n';
}

void cmd_pipeline(const RunConfig& config) {
    cmd_synth(config);
    RunConfig per_scenario = config;
    per_scenario.scenario_min_res.reset();  // canonical ranges for all five
    per_scenario.scenario_max_res.reset();
    for (const auto& spec : default_scenarios()) {
        per_scenario.scenario_id = spec.id;
        cmd_split(per_scenario);
    }
    for (const auto& spec : default_scenarios()) {
        per_scenario.scenario_id = spec.id;
        cmd_train(per_scenario);
    }
    per_scenario.scenario_id = config.scenario_id;
    cmd_recommend(per_scenario, {}, /*all_users=*/true);
    cmd_evaluate(per_scenario);
}

}  // namespace hotelrec
