#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hotelrec/als.hpp"
#include "hotelrec/hybrid.hpp"
#include "hotelrec/synth.hpp"
#include "hotelrec/types.hpp"

namespace hotelrec {

// Flat key=value store: file entries first, command-line overrides win.
class KeyValueConfig {
public:
    void load_file(const std::filesystem::path& path);
    void set(const std::string& key, std::string value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

struct RunConfig {
    std::filesystem::path out_dir = "out";

    std::uint64_t seed = 42;

    int scenario_id = 1;
    std::optional<int> scenario_min_res;  // overrides the canonical range
    std::optional<int> scenario_max_res;

    int pca_dims = 11;
    int kmeans_k = 50;
    int kmeans_max_iter = 100;
    // which content retrieval path `recommend` uses when no explicit
    // engine list is given: "full", "cluster" or "both"
    std::string content_mode = "both";
    std::uint64_t content_seed = 0;  // derived from seed unless set

    AlsConfig als;  // seed derived from root seed unless cf.seed is set

    HybridSpec hybrid;

    std::vector<int> eval_ns = {5, 10, 100};

    SynthSpec synth;  // seed derived from root seed unless synth.seed is set

    std::string clean_bounds;  // name:lo:hi;... applied by clean_hotels

    int recommend_n = 10;
    std::vector<std::string> recommend_engines;  // empty = all engines
};

// Resolves defaults, validates ranges and derives per-module seeds.
RunConfig resolve_config(const KeyValueConfig& kv);

}  // namespace hotelrec
