#include "CLI11.hpp"

#include "sdsnn/checkpoint.hpp"
#include "sdsnn/config.hpp"
#include "sdsnn/data.hpp"
#include "sdsnn/errors.hpp"
#include "sdsnn/trainer.hpp"

#include <charconv>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string fixed2(double value) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 2);
    (void)ec;
    return std::string(buf, ptr);
}

void print_summary(const sdsnn::TrainResult& result, const std::string& prefix) {
    std::cout << prefix << "acc=" << fixed2(result.final_test_acc)
              << " compression=" << fixed2(result.final_compression) << "\n";
}

// Short sweep-parameter aliases on top of full dotted config keys.
std::string resolve_param_key(const std::string& name) {
    if (name == "t_num") return "constraint.t_num";
    if (name == "rho_fc") return "prune.rho_fc";
    if (name == "rho_conv") return "prune.rho_conv";
    if (name == "rho_g0") return "regen.rho_g0";
    return name;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_train(const std::string& config_path, const std::string& resume_path,
              const std::string& mode, const std::string& seed,
              const std::string& out_dir) {
    if (!resume_path.empty()) {
        sdsnn::require(config_path.empty() && mode.empty() && seed.empty() &&
                           out_dir.empty(),
                       "--resume cannot be combined with other train options");
        const sdsnn::TrainResult result = sdsnn::resume_training(resume_path);
        print_summary(result, "");
        return 0;
    }
    sdsnn::require(!config_path.empty(), "train requires --config (or --resume)");
    sdsnn::ExperimentConfig cfg = sdsnn::load_config(config_path);
    if (!mode.empty()) sdsnn::set_config_key(cfg, "mode", mode);
    if (!seed.empty()) sdsnn::set_config_key(cfg, "seed", seed);
    if (!out_dir.empty()) sdsnn::set_config_key(cfg, "out.dir", out_dir);
    const sdsnn::TrainResult result = sdsnn::run_training(cfg);
    print_summary(result, "");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::string& values, const std::string& out_dir) {
    const std::string key = resolve_param_key(param);
    const std::vector<std::string> list = split_csv(values);
    sdsnn::require(!list.empty(), "sweep requires a non-empty --values list");
    const sdsnn::ExperimentConfig base = sdsnn::load_config(config_path);
    const std::string root = out_dir.empty() ? base.out_dir : out_dir;
    for (const std::string& value : list) {
        sdsnn::ExperimentConfig cfg = base;
        sdsnn::set_config_key(cfg, key, value);
        cfg.out_dir = root + "/sweep_" + param + "_" + value;
        const sdsnn::TrainResult result = sdsnn::run_training(cfg);
        print_summary(result, param + "=" + value + " ");
    }
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_dir,
             int batch) {
    sdsnn::TrainingState state = sdsnn::checkpoint_load(checkpoint_path);
    sdsnn::ExperimentConfig cfg = state.cfg;
    if (!data_dir.empty()) {
        namespace fs = std::filesystem;
        auto rebase = [&](std::string& path) {
            sdsnn::require(!path.empty(),
                           "checkpoint config names no data file to locate "
                           "under --data");
            path = (fs::path(data_dir) / fs::path(path).filename()).string();
        };
        switch (cfg.source) {
        case sdsnn::DataSource::synthetic:
            throw sdsnn::ContractError(
                "--data is not applicable: checkpoint uses a synthetic corpus");
        case sdsnn::DataSource::idx:
            rebase(cfg.test_images);
            rebase(cfg.test_labels);
            break;
        case sdsnn::DataSource::frames:
            rebase(cfg.test_frames);
            break;
        }
    }

    sdsnn::Dataset test;
    switch (cfg.source) {
    case sdsnn::DataSource::synthetic:
        test = sdsnn::synthetic_corpus(cfg.syn_seed + 1, cfg.syn_test,
                                       cfg.syn_channels, cfg.syn_height,
                                       cfg.syn_width, cfg.syn_classes,
                                       cfg.syn_noise);
        break;
    case sdsnn::DataSource::idx:
        test = sdsnn::load_idx(cfg.test_images, cfg.test_labels);
        break;
    case sdsnn::DataSource::frames:
        test = sdsnn::load_frames(cfg.test_frames);
        break;
    }
    test.validate();

    sdsnn::Network net(cfg.network_spec());
    const double acc = sdsnn::evaluate(net, state.params, state.mask, test,
                                       batch > 0 ? batch : cfg.batch_size);
    std::cout << "acc=" << fixed2(acc) << " compression="
              << fixed2(sdsnn::compression_rate(state.mask)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking-network training with adaptive sparse structure "
                 "development (boundary constraint, structured pruning, "
                 "gradient-triggered regeneration)"};
    app.require_subcommand(1);

    std::string train_config, train_resume, train_mode, train_seed, train_out;
    CLI::App* train = app.add_subcommand("train", "Run one training experiment");
    train->add_option("--config", train_config, "Config file (key = value)");
    train->add_option("--resume", train_resume,
                      "Resume from a checkpoint written by a previous run");
    train->add_option("--mode", train_mode,
                      "full|baseline|constraint_only|no_regeneration");
    train->add_option("--seed", train_seed, "Override the config seed");
    train->add_option("--out", train_out, "Override the output directory");

    std::string sweep_config, sweep_param, sweep_values, sweep_out;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Train once per value of one parameter");
    sweep->add_option("--config", sweep_config, "Config file (key = value)")
        ->required();
    sweep->add_option("--param", sweep_param,
                      "Parameter to sweep (e.g. t_num or any config key)")
        ->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")
        ->required();
    sweep->add_option("--out", sweep_out, "Root output directory");

    std::string eval_checkpoint, eval_data;
    int eval_batch = 0;
    CLI::App* eval =
        app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
    eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")
        ->required();
    eval->add_option("--data", eval_data,
                     "Directory holding the test data files (defaults to the "
                     "paths stored in the checkpoint)");
    eval->add_option("--batch", eval_batch, "Evaluation batch size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (train->parsed()) {
            return cmd_train(train_config, train_resume, train_mode, train_seed,
                             train_out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_out);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_checkpoint, eval_data, eval_batch);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
