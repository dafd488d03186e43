#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hotelrec/commands.hpp"
#include "hotelrec/config.hpp"

namespace {

using hotelrec::KeyValueConfig;

struct FlagBinding {
    std::string key;    // config key the flag overrides
    std::string value;  // raw text; validated by resolve_config
};

// Registers a string-valued flag that lands in the key=value store only
// when the user passed it, so file values and defaults stay in charge.
void bind_flag(CLI::App* cmd, std::vector<FlagBinding>& store, const std::string& flag,
          const std::string& key, const std::string& help) {
    store.push_back({key, ""});
    auto* slot = &store.back();
    cmd->add_option_function<std::string>(
        flag, [slot](const std::string& v) { slot->value = v; }, help + " [key: " + key + "]");
}

void add_synth_flags(CLI::App* cmd, std::vector<FlagBinding>& store) {
    bind_flag(cmd, store, "--users", "synth.users", "users to generate");
    bind_flag(cmd, store, "--hotels", "synth.hotels", "hotels to generate");
    bind_flag(cmd, store, "--feature-dim", "synth.feature_dim", "hotel feature columns");
    bind_flag(cmd, store, "--rank", "synth.latent_rank", "planted latent rank");
    bind_flag(cmd, store, "--res-min", "synth.res_min", "min reservations per user");
    bind_flag(cmd, store, "--res-max", "synth.res_max", "max reservations per user");
    bind_flag(cmd, store, "--clusters", "synth.clusters", "planted hotel clusters");
}

void add_train_flags(CLI::App* cmd, std::vector<FlagBinding>& store) {
    bind_flag(cmd, store, "--cf.latent_dim", "cf.latent_dim", "ALS latent dimension");
    bind_flag(cmd, store, "--cf.lambda", "cf.lambda", "ALS regularization");
    bind_flag(cmd, store, "--cf.sweeps", "cf.sweeps", "ALS sweeps");
    bind_flag(cmd, store, "--cf.tol", "cf.tol", "ALS early-stop tolerance");
    bind_flag(cmd, store, "--content.pca_dims", "content.pca_dims", "PCA output dimensions");
    bind_flag(cmd, store, "--content.kmeans_k", "content.kmeans_k", "k-means cluster count");
    bind_flag(cmd, store, "--content.mode", "content.mode",
              "content retrieval for recommend defaults: full, cluster or both");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid hotel recommender: synthesize, split, train, recommend, evaluate"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file")->expected(1);

    // reserve so FlagBinding pointers stay valid
    std::vector<FlagBinding> flags;
    flags.reserve(128);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value configuration file")->expected(1);
        bind_flag(cmd, flags, "--seed", "seed", "root seed");
        bind_flag(cmd, flags, "--out", "paths.out", "artifact directory");
        bind_flag(cmd, flags, "--scenario", "scenario.id", "scenario 1..5");
        bind_flag(cmd, flags, "--n", "eval.ns", "list lengths, e.g. 5,10,100");
        bind_flag(cmd, flags, "--engine", "recommend.engines",
             "engines: content_full,content_cluster,cf,hybrid_full,hybrid_cluster");
    };

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    add_common(synth);
    add_synth_flags(synth, flags);

    auto* split = app.add_subcommand("split", "materialize one scenario's train/test split");
    add_common(split);
    bind_flag(split, flags, "--min-res", "scenario.min_res", "override reservation-count lower bound");
    bind_flag(split, flags, "--max-res", "scenario.max_res", "override reservation-count upper bound");

    auto* train = app.add_subcommand("train", "fit PCA, k-means and ALS on a split");
    add_common(train);
    add_train_flags(train, flags);

    auto* recommend = app.add_subcommand("recommend", "emit top-N lists for users");
    add_common(recommend);
    std::vector<std::string> users;
    bool all_users = false;
    recommend->add_option("--user", users, "user id (repeatable)");
    recommend->add_flag("--all", all_users, "all users of the scenario's train split");
    bind_flag(recommend, flags, "--topn", "recommend.n", "list length to emit");

    auto* evaluate = app.add_subcommand("evaluate", "recall report over all five scenarios");
    add_common(evaluate);

    auto* pipeline = app.add_subcommand("pipeline", "synth + split + train + recommend + evaluate");
    add_common(pipeline);
    add_synth_flags(pipeline, flags);
    add_train_flags(pipeline, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        KeyValueConfig kv;
        if (!config_path.empty()) kv.load_file(config_path);
        for (const auto& f : flags)
            if (!f.value.empty()) kv.set(f.key, f.value);
        const hotelrec::RunConfig config = hotelrec::resolve_config(kv);

        if (synth->parsed()) hotelrec::cmd_synth(config);
        if (split->parsed()) hotelrec::cmd_split(config);
        if (train->parsed()) hotelrec::cmd_train(config);
        if (recommend->parsed()) hotelrec::cmd_recommend(config, users, all_users);
        if (evaluate->parsed()) hotelrec::cmd_evaluate(config);
        if (pipeline->parsed()) hotelrec::cmd_pipeline(config);
        return 0;
    } catch (const hotelrec::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const hotelrec::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const hotelrec::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    }
}
