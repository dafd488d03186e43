#include "hotelrec/config.hpp"

#include <algorithm>
#include <fstream>

#include "hotelrec/csv.hpp"
#include "hotelrec/rng.hpp"

namespace hotelrec {

namespace {

std::string trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

void KeyValueConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = trim(text.substr(0, eq));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        entries_[key] = trim(text.substr(eq + 1));
    }
}

void KeyValueConfig::set(const std::string& key, std::string value) {
    entries_[key] = std::move(value);
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.contains(key); }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto v = csv::parse_int(it->second);
    if (!v) throw ConfigError("config key " + key + " must be an integer, got: " + it->second);
    return *v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto v = csv::parse_double(it->second);
    if (!v) throw ConfigError("config key " + key + " must be a number, got: " + it->second);
    return *v;
}

namespace {

Source parse_source(const std::string& text, const std::string& key) {
    if (text == "content") return Source::Content;
    if (text == "cf") return Source::Cf;
    throw ConfigError("config key " + key + " must be content or cf, got: " + text);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = trim(text.substr(start, end - start));
        if (!item.empty()) {
            const auto v = csv::parse_int(item);
            if (!v || *v < 1)
                throw ConfigError("config key " + key + " needs positive integers, got: " + item);
            out.push_back(int(*v));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    if (out.empty()) throw ConfigError("config key " + key + " is empty");
    return out;
}

}  // namespace

RunConfig resolve_config(const KeyValueConfig& kv) {
    RunConfig c;
    c.out_dir = kv.get_string("paths.out", "out");
    c.seed = std::uint64_t(kv.get_int("seed", 42));

    c.scenario_id = int(kv.get_int("scenario.id", 1));
    if (c.scenario_id < 1 || c.scenario_id > 5)
        throw ConfigError("scenario.id must be 1..5");
    if (kv.has("scenario.min_res")) c.scenario_min_res = int(kv.get_int("scenario.min_res", 0));
    if (kv.has("scenario.max_res")) c.scenario_max_res = int(kv.get_int("scenario.max_res", 0));

    c.pca_dims = int(kv.get_int("content.pca_dims", 11));
    c.kmeans_k = int(kv.get_int("content.kmeans_k", 50));
    c.kmeans_max_iter = int(kv.get_int("content.kmeans_max_iter", 100));
    c.content_mode = kv.get_string("content.mode", "both");
    if (c.content_mode != "full" && c.content_mode != "cluster" && c.content_mode != "both")
        throw ConfigError("content.mode must be full, cluster or both");
    c.content_seed = kv.has("content.seed") ? std::uint64_t(kv.get_int("content.seed", 0))
                                            : derive_seed(c.seed, "content");
    if (c.pca_dims < 1) throw ConfigError("content.pca_dims must be >= 1");
    if (c.kmeans_k < 1) throw ConfigError("content.kmeans_k must be >= 1");

    c.als.latent_dim = int(kv.get_int("cf.latent_dim", 20));
    c.als.lambda = kv.get_double("cf.lambda", 0.1);
    c.als.sweeps = int(kv.get_int("cf.sweeps", 15));
    c.als.tol = kv.get_double("cf.tol", 1e-4);
    c.als.seed = kv.has("cf.seed") ? std::uint64_t(kv.get_int("cf.seed", 0))
                                   : derive_seed(c.seed, "cf");
    if (c.als.latent_dim < 1) throw ConfigError("cf.latent_dim must be >= 1");
    if (c.als.lambda < 0.0) throw ConfigError("cf.lambda must be >= 0");
    if (c.als.sweeps < 1) throw ConfigError("cf.sweeps must be >= 1");

    c.hybrid.first = parse_source(kv.get_string("hybrid.first", "content"), "hybrid.first");
    c.hybrid.odd_slot = parse_source(kv.get_string("hybrid.odd_slot", "content"), "hybrid.odd_slot");

    c.eval_ns = parse_int_list(kv.get_string("eval.ns", "5,10,100"), "eval.ns");

    c.synth.users = int(kv.get_int("synth.users", 1000));
    c.synth.hotels = int(kv.get_int("synth.hotels", 200));
    c.synth.feature_dim = int(kv.get_int("synth.feature_dim", 24));
    c.synth.latent_rank = int(kv.get_int("synth.latent_rank", 5));
    c.synth.res_min = int(kv.get_int("synth.res_min", 2));
    c.synth.res_max = int(kv.get_int("synth.res_max", 10));
    c.synth.clusters = int(kv.get_int("synth.clusters", 8));
    c.synth.seed = kv.has("synth.seed") ? std::uint64_t(kv.get_int("synth.seed", 0))
                                        : derive_seed(c.seed, "synth");
    if (c.synth.users < 1) throw ConfigError("synth.users must be >= 1");
    if (c.synth.hotels < 1) throw ConfigError("synth.hotels must be >= 1");

    c.clean_bounds = kv.get_string("clean.bounds", "");

    // --n steers recommend too unless recommend.n is set explicitly
    c.recommend_n = int(kv.get_int("recommend.n", kv.has("eval.ns") ? c.eval_ns.front() : 10));
    if (c.recommend_n < 1) throw ConfigError("recommend.n must be >= 1");
    const std::string engines = kv.get_string("recommend.engines", "");
    if (!engines.empty()) {
        std::size_t start = 0;
        while (start <= engines.size()) {
            std::size_t end = engines.find(',', start);
            if (end == std::string::npos) end = engines.size();
            const std::string name = trim(engines.substr(start, end - start));
            if (!name.empty()) {
                if (!engine_from_name(name))
                    throw ConfigError("unknown engine: " + name);
                c.recommend_engines.push_back(name);
            }
            if (end == engines.size()) break;
            start = end + 1;
        }
    }
    return c;
}

}  // namespace hotelrec
