#pragma once

#include "sdsnn/checkpoint.hpp"
#include "sdsnn/config.hpp"
#include "sdsnn/data.hpp"
#include "sdsnn/snn.hpp"

#include <string>
#include <vector>

namespace sdsnn {

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;   // percent
    double test_acc = 0.0;    // percent
    double compression = 0.0; // percent
    std::vector<std::size_t> alive_units;  // per weighted layer
    double rho_c = 0.0;
    double rho_f = 0.0;
    double rho_g = 0.0;
    std::size_t revived = 0;
    double wall_s = 0.0;
};

// CSV header/rows. Every column except the trailing wall_s is a pure
// function of (config, seed); determinism tests compare rows with wall_s
// stripped.
std::string metrics_header(std::size_t weighted_layers);
std::string metrics_row(const EpochMetrics& row);

struct TrainResult {
    std::vector<EpochMetrics> metrics;
    double final_test_acc = 0.0;
    double final_compression = 0.0;
    std::string metrics_path;
    std::string checkpoint_path;
};

// Builds train/test datasets from the config (synthetic corpus, IDX pair, or
// frame containers).
void load_datasets(const ExperimentConfig& cfg, Dataset& train, Dataset& test);

// Fresh training run per the config: per epoch, (1) minibatch
// forward/backward/Adam over the train split, (2) boundary constraint unless
// baseline, (3) past START and when the mode permits: importance -> prune ->
// rate update, then regenerate -> regen-rate update unless no_regeneration,
// (4) evaluate, (5) metrics row + checkpoint. Deterministic given the config.
// Throws TrainingAbort on non-finite gradients (the last checkpoint survives).
TrainResult run_training(const ExperimentConfig& cfg);

// Continues from a checkpoint; the remaining epochs reproduce an
// uninterrupted run bit-for-bit (wall_s column aside).
TrainResult resume_training(const std::string& checkpoint_path);

// Accuracy percent by argmax (first maximum wins ties), evaluated in batches.
double evaluate(const Network& net, const Parameters& params,
                const StructureMask& mask, const Dataset& data, int batch_size);

} // namespace sdsnn
