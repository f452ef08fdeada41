#pragma once

#include "sdsnn/net.hpp"

#include <cstdint>
#include <string>

namespace sdsnn {

// Ablation modes (each row of the mechanism-combination table): baseline
// trains the plain SNN, constraint_only adds boundary clamping, no_regeneration
// adds pruning, full adds regeneration.
enum class Mode { baseline, constraint_only, no_regeneration, full };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

enum class DataSource { synthetic, idx, frames };

DataSource parse_data_source(const std::string& name);
std::string data_source_name(DataSource source);

// Everything a run needs, loadable from a flat key=value file with dotted
// keys ('#' starts a comment; unknown keys are rejected). Every field has a
// default; CLI flags override file values.
struct ExperimentConfig {
    // network
    std::string arch = "Input-15C3-AvgPool2-40C3-AvgPool2-Flatten-300FC-10FC";
    int in_channels = 1;
    int in_height = 28;
    int in_width = 28;
    int time_steps = 8;
    double tau = 0.2;
    double v_th = 0.5;
    double a = 1.0;

    // run
    int epochs = 150;
    int batch_size = 64;
    std::uint64_t seed = 1;
    Mode mode = Mode::full;
    std::string out_dir = "out";
    int checkpoint_every = 1;  // epochs between checkpoints; 0 = final only

    // optimizer (Adam with constant lr)
    double lr = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    // constraint
    int t_num = 18;
    double epsilon = 0.75;

    // pruning
    double rho_conv = 10.0;
    double rho_fc = 35.0;
    double prune_alpha = 1.0;
    double prune_beta = 0.00075;
    int start_epoch = -1;  // -1: round(0.24 * epochs)
    int mid_epoch = -1;    // -1: round(0.40 * epochs)
    double rho_cap = 95.0;
    bool per_layer = false;

    // regeneration
    double rho_g0 = 1.0;
    double gamma = 1.1;
    int regen_t_num = -1;  // -1: share constraint t_num

    // data
    DataSource source = DataSource::synthetic;
    std::string train_images, train_labels, test_images, test_labels;
    std::string train_frames, test_frames;
    int syn_classes = 4;
    int syn_train = 2000;
    int syn_test = 500;
    int syn_channels = 1;
    int syn_height = 12;
    int syn_width = 12;
    double syn_noise = 0.2;
    std::uint64_t syn_seed = 99;

    // START/MID scale with the epoch budget, preserving the 36/60-of-150
    // ratios, unless set explicitly.
    int resolved_start() const;
    int resolved_mid() const;
    int resolved_regen_t_num() const {
        return regen_t_num >= 0 ? regen_t_num : t_num;
    }

    NetworkSpec network_spec() const;

    // Structural checks plus existence of any referenced data files.
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Applies one key=value override (same keys as the config file); used by CLI
// flags and sweep mode. Throws ParseError on unknown keys or bad values.
void set_config_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// Canonical full dump (every key, fixed order); parse_config_text of the
// result reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace sdsnn
