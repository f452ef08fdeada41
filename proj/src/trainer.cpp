#include "sdsnn/trainer.hpp"

#include "sdsnn/errors.hpp"
#include "sdsnn/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sdsnn {

namespace {

std::string fmt(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

int argmax_first(const double* row, int n) {
    int best = 0;
    double best_value = row[0];
    for (int c = 1; c < n; ++c) {
        if (row[c] > best_value) {
            best_value = row[c];
            best = c;
        }
    }
    return best;
}

void zero_dead(Parameters& params, const StructureMask& mask) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        kernels::masked_copy(params.layers[l].w.data(),
                             params.layers[l].w.data(),
                             mask.layers[l].syn_alive.data(),
                             params.layers[l].w.size());
        kernels::masked_copy(params.layers[l].b.data(),
                             params.layers[l].b.data(),
                             mask.layers[l].unit_alive.data(),
                             params.layers[l].b.size());
    }
}

void zero_dead_adam(AdamState& adam, const StructureMask& mask) {
    for (std::size_t l = 0; l < adam.layers.size(); ++l) {
        AdamLayer& al = adam.layers[l];
        const std::uint8_t* syn = mask.layers[l].syn_alive.data();
        const std::uint8_t* unit = mask.layers[l].unit_alive.data();
        kernels::masked_copy(al.m_w.data(), al.m_w.data(), syn, al.m_w.size());
        kernels::masked_copy(al.v_w.data(), al.v_w.data(), syn, al.v_w.size());
        kernels::masked_copy(al.m_b.data(), al.m_b.data(), unit, al.m_b.size());
        kernels::masked_copy(al.v_b.data(), al.v_b.data(), unit, al.v_b.size());
    }
}

std::vector<LayerKind> weighted_kinds(const NetworkSpec& spec) {
    std::vector<LayerKind> kinds;
    for (const LayerSpec& layer : spec.layers) {
        if (layer.weighted()) kinds.push_back(layer.kind);
    }
    return kinds;
}

// Representative per-kind rho for the metrics row (deepest prunable layer of
// the kind when per-layer rates are enabled).
double kind_rho(const PruneSchedule& sched,
                const std::vector<LayerKind>& kinds, LayerKind kind) {
    if (!sched.per_layer) {
        return kind == LayerKind::conv ? sched.rho_conv : sched.rho_fc;
    }
    for (std::size_t wl = kinds.size() - 1; wl-- > 0;) {
        if (kinds[wl] == kind) return sched.rho_layers[wl];
    }
    return kind == LayerKind::conv ? sched.rho_conv : sched.rho_fc;
}

struct RunOutputs {
    std::string metrics_path;
    std::string checkpoint_path;
};

RunOutputs prepare_outputs(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    RunOutputs out;
    out.metrics_path = cfg.out_dir + "/metrics.csv";
    out.checkpoint_path = cfg.out_dir + "/checkpoint.bin";
    return out;
}

void rewrite_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    require(static_cast<bool>(out), "failed writing '" + path + "'");
}

TrainResult run_loop(TrainingState& state, const Dataset& train,
                     const Dataset& test) {
    const ExperimentConfig& cfg = state.cfg;
    const NetworkSpec spec = cfg.network_spec();
    Network net(spec);
    const std::vector<LayerKind> kinds = weighted_kinds(spec);
    const int classes = net.class_count();
    require(train.class_count <= classes && test.class_count <= classes,
            "dataset has more classes than network outputs");
    require(train.frame_size() == net.shape().input.activation_size(),
            "dataset shape does not match network input");

    const RunOutputs outputs = prepare_outputs(cfg);
    rewrite_file(outputs.metrics_path, state.metrics_csv);

    const AdamConfig adam_cfg{cfg.lr, cfg.adam_beta1, cfg.adam_beta2,
                              cfg.adam_eps};
    const ConstraintConfig constraint_cfg{cfg.t_num, cfg.epsilon};
    const int start = cfg.resolved_start();

    Rng shuffle;
    shuffle.deserialize(state.rng_shuffle);

    const int t_steps = spec.time_steps;
    const std::size_t frame = train.frame_size();
    const std::size_t n_train = train.size();

    std::vector<std::size_t> order(n_train);
    std::vector<double> input;
    std::vector<int> batch_labels;
    std::vector<double> dlogits;
    ForwardCache cache;
    Gradients grads;
    Gradients grad_acc = make_parameters(net.shape());

    TrainResult result;
    result.metrics_path = outputs.metrics_path;
    result.checkpoint_path = outputs.checkpoint_path;

    // Reconstruct already-completed rows for the result (resume case).
    for (int epoch = state.completed_epochs + 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();

        for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
        for (std::size_t i = n_train; i > 1; --i) {
            const std::size_t j =
                static_cast<std::size_t>(shuffle.below(i));
            std::swap(order[i - 1], order[j]);
        }

        for (ParamLayer& layer : grad_acc.layers) {
            std::fill(layer.w.begin(), layer.w.end(), 0.0);
            std::fill(layer.b.begin(), layer.b.end(), 0.0);
        }
        std::size_t batches = 0;
        double loss_sum = 0.0;
        std::size_t train_correct = 0;

        for (std::size_t begin = 0; begin < n_train;
             begin += static_cast<std::size_t>(cfg.batch_size)) {
            const int b = static_cast<int>(
                std::min(static_cast<std::size_t>(cfg.batch_size),
                         n_train - begin));
            input.assign(static_cast<std::size_t>(b) * t_steps * frame, 0.0);
            batch_labels.assign(static_cast<std::size_t>(b), 0);
            for (int s = 0; s < b; ++s) {
                const std::size_t idx = order[begin + s];
                encode_input(train, idx, t_steps,
                             input.data() +
                                 static_cast<std::size_t>(s) * t_steps * frame);
                batch_labels[s] = train.labels[idx];
            }
            net.forward_pass(state.params, state.mask, input.data(), b, cache);
            const double loss = softmax_cross_entropy(
                cache.logits, batch_labels, b, classes, dlogits);
            loss_sum += loss * b;
            for (int s = 0; s < b; ++s) {
                if (argmax_first(cache.logits.data() +
                                     static_cast<std::size_t>(s) * classes,
                                 classes) == batch_labels[s]) {
                    ++train_correct;
                }
            }
            net.backward_pass(cache, state.mask, dlogits.data(), grads);
            for (std::size_t l = 0; l < grads.layers.size(); ++l) {
                kernels::abs_accumulate(grad_acc.layers[l].w.data(),
                                        grads.layers[l].w.data(),
                                        grads.layers[l].w.size());
            }
            optimizer_step(state.params, grads, state.mask, state.adam,
                           adam_cfg);
            ++batches;
        }

        if (cfg.mode != Mode::baseline) {
            apply_constraint(state.params, state.w_prev, state.bounds,
                             constraint_cfg);
            state.w_prev = state.params;
        }

        std::size_t revived = 0;
        const bool prunes = (cfg.mode == Mode::no_regeneration ||
                             cfg.mode == Mode::full) &&
                            epoch > start;
        if (prunes) {
            std::vector<std::vector<double>> importance(kinds.size());
            for (std::size_t wl = 0; wl < kinds.size(); ++wl) {
                importance[wl] = neuron_importance(
                    state.bounds.layers[wl], state.mask.layers[wl],
                    state.params.layers[wl].rows, state.params.layers[wl].cols);
            }
            const PruneReport report =
                prune_step(importance, state.mask, state.sched, kinds);
            if (report.floor_clamped) {
                std::fprintf(stderr,
                             "[warn] epoch %d: prune target clamped to keep "
                             ">=1 alive unit per layer\n",
                             epoch);
            }
            update_prune_rates(state.sched, epoch,
                               alive_unit_counts(state.mask), kinds);
            if (cfg.mode == Mode::full) {
                Gradients mean_grads = grad_acc;
                for (ParamLayer& layer : mean_grads.layers) {
                    const double inv = 1.0 / static_cast<double>(batches);
                    for (double& g : layer.w) g *= inv;
                }
                const RegenReport rr = regenerate_step(
                    mean_grads, state.mask, state.regen, state.bounds);
                revived = rr.revived_synapses;
                update_regen_rate(state.regen, epoch, start);
            }
            // Mask mutations pin dead weights/moments to exact zero and
            // freeze dead bounds (w and w_prev agree at 0 while dead).
            zero_dead(state.params, state.mask);
            zero_dead(state.w_prev, state.mask);
            zero_dead_adam(state.adam, state.mask);
        }

        const double test_acc =
            evaluate(net, state.params, state.mask, test, cfg.batch_size);

        EpochMetrics row;
        row.epoch = epoch;
        row.train_loss = loss_sum / static_cast<double>(n_train);
        row.train_acc =
            100.0 * static_cast<double>(train_correct) /
            static_cast<double>(n_train);
        row.test_acc = test_acc;
        row.compression = compression_rate(state.mask);
        row.alive_units = alive_unit_counts(state.mask);
        row.rho_c = kind_rho(state.sched, kinds, LayerKind::conv);
        row.rho_f = kind_rho(state.sched, kinds, LayerKind::fc);
        row.rho_g = state.regen.rho_g;
        row.revived = revived;
        row.wall_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        result.metrics.push_back(row);

        state.metrics_csv += metrics_row(row);
        rewrite_file(outputs.metrics_path, state.metrics_csv);
        state.completed_epochs = epoch;
        state.rng_shuffle = shuffle.serialize();
        if (cfg.checkpoint_every > 0 &&
            (epoch % cfg.checkpoint_every == 0 || epoch == cfg.epochs)) {
            checkpoint_save(state, outputs.checkpoint_path);
        } else if (epoch == cfg.epochs) {
            checkpoint_save(state, outputs.checkpoint_path);
        }
        result.final_test_acc = row.test_acc;
        result.final_compression = row.compression;
    }
    if (result.metrics.empty()) {
        // Resuming an already-finished run: report the stored final state.
        result.final_compression = compression_rate(state.mask);
        result.final_test_acc =
            evaluate(net, state.params, state.mask, test, cfg.batch_size);
    }
    return result;
}

} // namespace

std::string metrics_header(std::size_t weighted_layers) {
    std::string header = "epoch,train_loss,train_acc,test_acc,compression";
    for (std::size_t l = 0; l < weighted_layers; ++l) {
        header += ",alive_" + std::to_string(l);
    }
    header += ",rho_c,rho_f,rho_g,revived,wall_s\n";
    return header;
}

std::string metrics_row(const EpochMetrics& row) {
    std::string line = std::to_string(row.epoch);
    line += "," + fmt(row.train_loss);
    line += "," + fmt(row.train_acc);
    line += "," + fmt(row.test_acc);
    line += "," + fmt(row.compression);
    for (std::size_t alive : row.alive_units) {
        line += "," + std::to_string(alive);
    }
    line += "," + fmt(row.rho_c);
    line += "," + fmt(row.rho_f);
    line += "," + fmt(row.rho_g);
    line += "," + std::to_string(row.revived);
    line += "," + fmt(row.wall_s);
    line += "\n";
    return line;
}

void load_datasets(const ExperimentConfig& cfg, Dataset& train, Dataset& test) {
    switch (cfg.source) {
    case DataSource::synthetic:
        train = synthetic_corpus(cfg.syn_seed, cfg.syn_train, cfg.syn_channels,
                                 cfg.syn_height, cfg.syn_width, cfg.syn_classes,
                                 cfg.syn_noise);
        test = synthetic_corpus(cfg.syn_seed + 1, cfg.syn_test,
                                cfg.syn_channels, cfg.syn_height, cfg.syn_width,
                                cfg.syn_classes, cfg.syn_noise);
        break;
    case DataSource::idx:
        train = load_idx(cfg.train_images, cfg.train_labels);
        test = load_idx(cfg.test_images, cfg.test_labels);
        break;
    case DataSource::frames:
        train = load_frames(cfg.train_frames);
        test = load_frames(cfg.test_frames);
        break;
    }
    train.validate();
    test.validate();
}

TrainResult run_training(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset train, test;
    load_datasets(cfg, train, test);

    const NetworkSpec spec = cfg.network_spec();
    Network net(spec);

    TrainingState state;
    state.cfg = cfg;
    state.completed_epochs = 0;
    state.params = make_parameters(net.shape());
    Rng init_rng(cfg.seed);
    init_parameters(state.params, init_rng);
    state.w_prev = state.params;
    state.adam = make_adam_state(state.params);
    state.mask = make_all_alive_mask(state.params);
    state.bounds = init_boundaries(state.params);

    state.sched.rho_conv = cfg.rho_conv;
    state.sched.rho_fc = cfg.rho_fc;
    state.sched.alpha = cfg.prune_alpha;
    state.sched.beta = cfg.prune_beta;
    state.sched.start_epoch = cfg.resolved_start();
    state.sched.mid_epoch = cfg.resolved_mid();
    state.sched.rho_cap = cfg.rho_cap;
    state.sched.per_layer = cfg.per_layer;
    if (cfg.per_layer) {
        state.sched.init_per_layer(weighted_kinds(spec));
    }
    state.sched.validate();

    state.regen = make_regen_state(state.params, cfg.rho_g0, cfg.gamma,
                                   cfg.resolved_regen_t_num());

    Rng shuffle(cfg.seed + 1);
    state.rng_shuffle = shuffle.serialize();
    state.metrics_csv = metrics_header(state.params.layers.size());

    return run_loop(state, train, test);
}

TrainResult resume_training(const std::string& checkpoint_path) {
    TrainingState state = checkpoint_load(checkpoint_path);
    state.cfg.validate();
    Dataset train, test;
    load_datasets(state.cfg, train, test);
    return run_loop(state, train, test);
}

double evaluate(const Network& net, const Parameters& params,
                const StructureMask& mask, const Dataset& data,
                int batch_size) {
    require(batch_size >= 1, "evaluate needs batch_size >= 1");
    const int t_steps = net.spec().time_steps;
    const int classes = net.class_count();
    const std::size_t frame = data.frame_size();
    const std::size_t n = data.size();
    require(n > 0, "evaluate needs a non-empty dataset");

    ForwardCache cache;
    std::vector<double> input;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < n;
         begin += static_cast<std::size_t>(batch_size)) {
        const int b = static_cast<int>(
            std::min(static_cast<std::size_t>(batch_size), n - begin));
        input.assign(static_cast<std::size_t>(b) * t_steps * frame, 0.0);
        for (int s = 0; s < b; ++s) {
            encode_input(data, begin + s, t_steps,
                         input.data() +
                             static_cast<std::size_t>(s) * t_steps * frame);
        }
        net.forward_pass(params, mask, input.data(), b, cache);
        for (int s = 0; s < b; ++s) {
            const int pred = argmax_first(
                cache.logits.data() + static_cast<std::size_t>(s) * classes,
                classes);
            if (pred == data.labels[begin + s]) ++correct;
        }
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(n);
}

} // namespace sdsnn
