#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hotelrec/config.hpp"
#include "hotelrec/eval.hpp"

namespace hotelrec {

// Subcommand bodies, CLI-independent so tests can drive them directly.
// They throw ConfigError / DataError / NumericError; main maps those to
// exit codes 1 / 2 / 3.

void cmd_synth(const RunConfig& config);
void cmd_split(const RunConfig& config);
void cmd_train(const RunConfig& config);
// users may be empty with all_users = true
void cmd_recommend(const RunConfig& config, const std::vector<std::string>& users,
                   bool all_users);
void cmd_evaluate(const RunConfig& config);
void cmd_pipeline(const RunConfig& config);

// Trains the full engine stack (catalog, PCA, k-means, ALS) from a train
// split and the hotel table. The ALS loss trace and pseudo-inverse solve
// count are reported through the optional out-params.
EngineStack train_engine_stack(const std::vector<ReservationRecord>& train,
                               const HotelTable& hotel_table, const RunConfig& config,
                               std::vector<SweepLoss>* trace_out = nullptr,
                               int* singular_solves_out = nullptr);

// Rebuilds the stack from the model files under <out>/scenario<id>/.
EngineStack load_engine_stack(const RunConfig& config, int scenario_id);

std::filesystem::path scenario_dir(const RunConfig& config, int scenario_id);

}  // namespace hotelrec
