// Acceptance suite: one [PASS]/[FAIL]/[SKIP] line per shipped criterion,
// exit code 1 if anything fails. Run from the build tree:
//
//   ./sdsnn_acceptance [path/to/configs]
//
// The desk-scale criteria train real networks and dominate the runtime
// (several minutes); everything else finishes in seconds.

#include "oracles.hpp"
#include "sdsnn/checkpoint.hpp"
#include "sdsnn/config.hpp"
#include "sdsnn/constraint.hpp"
#include "sdsnn/errors.hpp"
#include "sdsnn/model.hpp"
#include "sdsnn/pruning.hpp"
#include "sdsnn/regeneration.hpp"
#include "sdsnn/rng.hpp"
#include "sdsnn/snn.hpp"
#include "sdsnn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace sdsnn;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
int g_passes = 0;
int g_skips = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (ok) {
        ++g_passes;
    } else {
        ++g_failures;
    }
}

void skip(const std::string& name, const std::string& detail) {
    std::printf("[SKIP] %s: %s\n", name.c_str(), detail.c_str());
    std::fflush(stdout);
    ++g_skips;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

std::string fmt1(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: boundary constraint vs the literal Algorithm-1 scalar oracle.
// ---------------------------------------------------------------------------

void constraint_oracle_criterion() {
    const char* name = "constraint-oracle";
    Timer timer;
    const std::size_t synapses = 1000;
    const int epochs = 60;
    const ConstraintConfig cfg{3, 0.75};
    Rng rng(0xC0FFEE);

    Parameters w;
    w.layers.resize(1);
    w.layers[0].rows = 1;
    w.layers[0].cols = synapses;
    w.layers[0].b.assign(1, 0.0);
    w.layers[0].w.resize(synapses);
    for (double& v : w.layers[0].w) v = rng.uniform(-1.0, 1.0);
    Parameters w_prev = w;
    SynapseBounds bounds = init_boundaries(w);

    std::vector<oracle::SynapseTrace> traces(synapses);
    std::vector<double> ref_w(synapses), ref_prev(synapses);
    for (std::size_t i = 0; i < synapses; ++i) {
        traces[i].r_pos = bounds.layers[0].r_pos[i];
        traces[i].r_neg = bounds.layers[0].r_neg[i];
        ref_w[i] = w.layers[0].w[i];
        ref_prev[i] = ref_w[i];
    }

    std::size_t mismatches = 0;
    for (int e = 0; e < epochs && mismatches == 0; ++e) {
        for (std::size_t i = 0; i < synapses; ++i) {
            const double next = ref_w[i] + rng.uniform(-0.25, 0.25);
            w.layers[0].w[i] = next;
            ref_w[i] = next;
        }
        apply_constraint(w, w_prev, bounds, cfg);
        for (std::size_t i = 0; i < synapses; ++i) {
            ref_w[i] = oracle::constraint_step(traces[i], ref_w[i], ref_prev[i],
                                               cfg.t_num, cfg.epsilon);
            ref_prev[i] = ref_w[i];
            const BoundsLayer& bl = bounds.layers[0];
            if (w.layers[0].w[i] != ref_w[i] || bl.r_pos[i] != traces[i].r_pos ||
                bl.r_neg[i] != traces[i].r_neg || bl.n_pos[i] != traces[i].n_pos ||
                bl.n_neg[i] != traces[i].n_neg ||
                bl.n_decay[i] != traces[i].n_decay ||
                bl.c_pos[i] != traces[i].c_pos ||
                bl.c_neg[i] != traces[i].c_neg) {
                ++mismatches;
            }
        }
        w_prev = w;
    }
    const double secs = timer.seconds();
    report(mismatches == 0 && secs < 10.0, name,
           std::to_string(synapses) + " trajectories x " +
               std::to_string(epochs) + " epochs, " +
               std::to_string(mismatches) + " mismatches (" + fmt1(secs) +
               " s, budget 10 s)");
}

// ---------------------------------------------------------------------------
// Criterion 2: vectorized BPTT vs the scalar per-sample oracle.
// ---------------------------------------------------------------------------

bool compare_network_to_oracle(const std::string& arch, int c, int h, int w,
                               int t, int batch, std::uint64_t seed,
                               bool with_mask, std::string& why) {
    NetworkSpec spec;
    spec.layers = parse_architecture(arch);
    spec.in_channels = c;
    spec.in_height = h;
    spec.in_width = w;
    spec.time_steps = t;
    spec.validate();
    const Network net(spec);
    const NetworkShape& shape = net.shape();

    Parameters params = make_parameters(shape);
    Rng rng(seed);
    init_parameters(params, rng);
    StructureMask mask = make_all_alive_mask(params);
    if (with_mask) {
        for (MaskLayer& ml : mask.layers) {
            for (std::uint8_t& alive : ml.syn_alive) {
                if (rng.below(4) == 0) alive = 0;
            }
        }
    }
    Parameters effective = params;
    apply_mask(params, mask, effective);

    const std::size_t frame = shape.input.activation_size();
    std::vector<double> input(static_cast<std::size_t>(batch) * t * frame);
    for (double& v : input) v = rng.uniform();

    ForwardCache cache;
    net.forward_pass(params, mask, input.data(), batch, cache);
    const int classes = net.class_count();
    std::vector<double> dlogits(static_cast<std::size_t>(batch) * classes);
    for (double& v : dlogits) v = rng.uniform(-1.0, 1.0);
    Gradients grads;
    net.backward_pass(cache, mask, dlogits.data(), grads);

    Parameters want = make_parameters(shape);
    for (int s = 0; s < batch; ++s) {
        const std::vector<double> sample_input(
            input.begin() + static_cast<std::size_t>(s) * t * frame,
            input.begin() + static_cast<std::size_t>(s + 1) * t * frame);
        const std::vector<double> sample_dlogits(
            dlogits.begin() + static_cast<std::size_t>(s) * classes,
            dlogits.begin() + static_cast<std::size_t>(s + 1) * classes);
        const oracle::SamplePass ref = oracle::run_sample(
            spec, shape, effective, sample_input, sample_dlogits);

        for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l) {
            const std::size_t act = shape.layers[l].activation_size();
            for (int tt = 0; tt < t; ++tt) {
                for (std::size_t i = 0; i < act; ++i) {
                    const double engine_x =
                        spec.layers[l].kind == LayerKind::fc
                            ? cache.act[l][tt][i * static_cast<std::size_t>(
                                                       batch) +
                                               static_cast<std::size_t>(s)]
                            : cache.act[l][tt][static_cast<std::size_t>(s) * act +
                                               i];
                    if (engine_x != ref.spikes[tt][l][i]) {
                        why = arch + ": spike mismatch at layer " +
                              std::to_string(l) + " t=" + std::to_string(tt);
                        return false;
                    }
                }
            }
        }
        for (int cc = 0; cc < classes; ++cc) {
            if (cache.logits[static_cast<std::size_t>(s) * classes + cc] !=
                ref.logits[cc]) {
                why = arch + ": logit mismatch";
                return false;
            }
        }
        for (std::size_t wl = 0; wl < want.layers.size(); ++wl) {
            for (std::size_t i = 0; i < want.layers[wl].w.size(); ++i) {
                want.layers[wl].w[i] += ref.grads.layers[wl].w[i];
            }
            for (std::size_t i = 0; i < want.layers[wl].b.size(); ++i) {
                want.layers[wl].b[i] += ref.grads.layers[wl].b[i];
            }
        }
    }
    const double rel = 1e-10;
    for (std::size_t wl = 0; wl < want.layers.size(); ++wl) {
        for (std::size_t i = 0; i < want.layers[wl].w.size(); ++i) {
            const double d = std::fabs(grads.layers[wl].w[i] -
                                       want.layers[wl].w[i]);
            if (d > rel * (1.0 + std::fabs(want.layers[wl].w[i]))) {
                why = arch + ": weight-grad error " + std::to_string(d);
                return false;
            }
        }
        for (std::size_t i = 0; i < want.layers[wl].b.size(); ++i) {
            const double d = std::fabs(grads.layers[wl].b[i] -
                                       want.layers[wl].b[i]);
            if (d > rel * (1.0 + std::fabs(want.layers[wl].b[i]))) {
                why = arch + ": bias-grad error " + std::to_string(d);
                return false;
            }
        }
    }
    return true;
}

void gradient_oracle_criterion() {
    const char* name = "gradient-oracle";
    Timer timer;
    Rng rng(20260814);
    int checked = 0;
    std::string why;
    bool ok = true;

    for (int round = 0; round < 100 && ok; ++round) {
        const int t = 1 + static_cast<int>(rng.below(4));
        const int batch = 1 + static_cast<int>(rng.below(3));
        const bool with_mask = rng.below(2) == 0;
        std::string arch;
        int c = 1;
        int h = 0;
        int w = 0;
        switch (rng.below(4)) {
        case 0: {  // fc stack
            const int a = 1 + static_cast<int>(rng.below(20));
            const int b = 1 + static_cast<int>(rng.below(12));
            const int o = 2 + static_cast<int>(rng.below(4));
            arch = "Input-" + std::to_string(a) + "FC-" + std::to_string(b) +
                   "FC-" + std::to_string(o) + "FC";
            h = 2 + static_cast<int>(rng.below(4));
            w = 2 + static_cast<int>(rng.below(4));
            break;
        }
        case 1: {  // conv -> fc
            const int ch = 1 + static_cast<int>(rng.below(4));
            const int k = rng.below(2) == 0 ? 1 : 3;
            const int o = 2 + static_cast<int>(rng.below(4));
            arch = "Input-" + std::to_string(ch) + "C" + std::to_string(k) +
                   "-" + std::to_string(o) + "FC";
            c = 1 + static_cast<int>(rng.below(2));
            h = 3 + static_cast<int>(rng.below(3));
            w = 3 + static_cast<int>(rng.below(3));
            break;
        }
        case 2: {  // conv -> avgpool -> fc
            const int ch = 1 + static_cast<int>(rng.below(4));
            const int m = 1 + static_cast<int>(rng.below(10));
            const int o = 2 + static_cast<int>(rng.below(4));
            arch = "Input-" + std::to_string(ch) + "C3-AvgPool2-" +
                   std::to_string(m) + "FC-" + std::to_string(o) + "FC";
            h = 4 + static_cast<int>(rng.below(3));
            w = 4 + static_cast<int>(rng.below(3));
            break;
        }
        default: {  // conv -> maxpool -> fc
            const int ch = 1 + static_cast<int>(rng.below(3));
            const int o = 2 + static_cast<int>(rng.below(4));
            arch = "Input-" + std::to_string(ch) + "C3-MaxPool2-" +
                   std::to_string(o) + "FC";
            h = 4 + static_cast<int>(rng.below(3));
            w = 4 + static_cast<int>(rng.below(3));
            break;
        }
        }
        ok = compare_network_to_oracle(arch, c, h, w, t, batch,
                                       rng.next_u64(), with_mask, why);
        ++checked;
    }
    const double secs = timer.seconds();
    report(ok && secs < 60.0, name,
           ok ? std::to_string(checked) +
                    " random networks, spikes exact, grads <= 1e-10 rel (" +
                    fmt1(secs) + " s, budget 60 s)"
              : why);
}

// ---------------------------------------------------------------------------
// Criterion 3: pruning/regeneration schedule arithmetic.
// ---------------------------------------------------------------------------

void schedule_criterion() {
    const char* name = "schedule-checks";
    Timer timer;
    bool ok = true;
    std::string why;

    for (double alpha : {1.0, 0.5}) {
        PruneSchedule sched;
        sched.alpha = alpha;
        sched.beta = 0.00075;
        sched.start_epoch = 12;
        sched.mid_epoch = 20;
        if (delta_schedule(12, sched) != alpha) {
            ok = false;
            why = "delta(START) != alpha";
        }
        if (delta_schedule(20, sched) !=
            alpha * std::exp(-static_cast<double>(20 - 12))) {
            ok = false;
            why = "delta(MID) != alpha*exp(-(MID-START))";
        }
        if (delta_schedule(21, sched) != 0.00075) {
            ok = false;
            why = "delta(MID+1) != beta";
        }
        for (int e = 12; e < 20 && ok; ++e) {
            if (delta_schedule(e + 1, sched) >= delta_schedule(e, sched)) {
                ok = false;
                why = "delta not strictly decreasing on the fast leg";
            }
        }
    }

    // rho_g partial sums: after k updates, rho_g == min(rho_g0 + sum_{j=1..k}
    // gamma^j, 99), with the same left-to-right accumulation order.
    {
        const double gamma = 1.1;
        RegenState st;
        st.rho_g = 1.0;
        st.gamma = gamma;
        const int start = 60;
        double partial = 1.0;
        for (int k = 1; k <= 60 && ok; ++k) {
            update_regen_rate(st, start + k, start);
            partial = std::min(partial + std::pow(gamma, k), 99.0);
            if (st.rho_g != partial) {
                ok = false;
                why = "rho_g diverges from closed-form partial sums at k=" +
                      std::to_string(k);
            }
        }
        if (ok && st.rho_g != 99.0) {
            ok = false;
            why = "rho_g cap of 99 not reached after 60 updates";
        }
    }

    const double secs = timer.seconds();
    report(ok && secs < 1.0, name,
           ok ? "delta and rho_g sequences exact (" + fmt1(secs) +
                    " s, budget 1 s)"
              : why);
}

// ---------------------------------------------------------------------------
// Criteria 4-6: desk-scale training, ablation ordering, compression
// convergence. All runs share the shipped desk config.
// ---------------------------------------------------------------------------

struct DeskRun {
    double acc = 0.0;
    double compression = 0.0;
};

DeskRun desk_run(const ExperimentConfig& base, const std::string& out_dir,
                 Mode mode, double rho_fc) {
    ExperimentConfig cfg = base;
    cfg.out_dir = out_dir;
    cfg.mode = mode;
    cfg.rho_fc = rho_fc;
    const TrainResult result = run_training(cfg);
    return {result.final_test_acc, result.final_compression};
}

void desk_criteria(const std::string& config_dir, const fs::path& out_root) {
    ExperimentConfig base;
    const std::string cfg_path = config_dir + "/desk_synthetic.cfg";
    try {
        base = load_config(cfg_path);
    } catch (const std::exception& e) {
        report(false, "desk-training", std::string("cannot load ") + cfg_path +
                                           ": " + e.what());
        report(false, "ablation-ordering", "desk config unavailable");
        report(false, "compression-convergence", "desk config unavailable");
        return;
    }

    Timer timer;
    const DeskRun full =
        desk_run(base, (out_root / "full").string(), Mode::full, base.rho_fc);
    const double full_secs = timer.seconds();
    {
        const bool ok = full.acc >= 95.0 && full.compression >= 30.0 &&
                        full.compression <= 70.0 && full_secs < 600.0;
        report(ok, "desk-training",
               "acc=" + fmt1(full.acc) + "% (needs >= 95), compression=" +
                   fmt1(full.compression) + "% (needs 30..70) (" +
                   fmt1(full_secs) + " s, budget 600 s)");
    }

    {
        const DeskRun no_regen =
            desk_run(base, (out_root / "no_regen").string(),
                     Mode::no_regeneration, base.rho_fc);
        const DeskRun constraint_only =
            desk_run(base, (out_root / "constraint_only").string(),
                     Mode::constraint_only, base.rho_fc);
        const DeskRun baseline = desk_run(
            base, (out_root / "baseline").string(), Mode::baseline, base.rho_fc);
        const double regen_gap = no_regen.compression - full.compression;
        const bool ok = regen_gap >= 5.0 &&
                        constraint_only.acc >= baseline.acc - 0.5;
        report(ok, "ablation-ordering",
               "compression no_regen-full=" + fmt1(regen_gap) +
                   "pp (needs >= 5), acc constraint_only=" +
                   fmt1(constraint_only.acc) + "% vs baseline=" +
                   fmt1(baseline.acc) + "% (allowed drop 0.5)");
    }

    {
        const DeskRun low =
            desk_run(base, (out_root / "rho25").string(), Mode::full, 25.0);
        const DeskRun high =
            desk_run(base, (out_root / "rho60").string(), Mode::full, 60.0);
        const double gap = std::fabs(low.compression - high.compression);
        const bool ok = gap <= 15.0;
        report(ok, "compression-convergence",
               "final compression rho_fc=25 -> " + fmt1(low.compression) +
                   "%, rho_fc=60 -> " + fmt1(high.compression) +
                   "%, gap=" + fmt1(gap) + "pp (needs <= 15)");
    }
}

// ---------------------------------------------------------------------------
// Criterion 8: structural invariants on randomized small problems.
// ---------------------------------------------------------------------------

bool prune_count_exactness(Rng& rng, std::string& why) {
    for (int round = 0; round < 200; ++round) {
        const std::size_t layers = 2 + rng.below(2);  // last one is output
        StructureMask mask;
        std::vector<std::vector<double>> importance;
        std::vector<LayerKind> kinds;
        PruneSchedule sched;
        sched.per_layer = false;
        sched.rho_fc = static_cast<double>(rng.below(101));  // 0..100
        sched.rho_conv = static_cast<double>(rng.below(101));

        std::vector<std::size_t> dead_before;
        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t rows = 1 + rng.below(12);
            const std::size_t cols = 1 + rng.below(6);
            MaskLayer ml;
            ml.unit_alive.assign(rows, 1);
            ml.syn_alive.assign(rows * cols, 1);
            std::vector<double> d(rows);
            for (std::size_t i = 0; i < rows; ++i) {
                d[i] = static_cast<double>(rng.below(5));  // force ties
                // Pre-kill some non-output units (output units never die).
                if (l + 1 < layers && rng.below(5) == 0) {
                    ml.unit_alive[i] = 0;
                    std::fill(ml.syn_alive.begin() +
                                  static_cast<std::ptrdiff_t>(i * cols),
                              ml.syn_alive.begin() +
                                  static_cast<std::ptrdiff_t>((i + 1) * cols),
                              static_cast<std::uint8_t>(0));
                }
            }
            std::size_t dead = 0;
            for (std::uint8_t a : ml.unit_alive) dead += (a == 0);
            dead_before.push_back(dead);
            mask.layers.push_back(std::move(ml));
            importance.push_back(std::move(d));
            kinds.push_back(rng.below(2) == 0 ? LayerKind::conv : LayerKind::fc);
        }

        prune_step(importance, mask, sched, kinds);

        for (std::size_t l = 0; l + 1 < layers; ++l) {
            const std::size_t original = mask.layers[l].unit_alive.size();
            const double rho =
                kinds[l] == LayerKind::conv ? sched.rho_conv : sched.rho_fc;
            std::size_t target = static_cast<std::size_t>(
                std::floor(rho / 100.0 * static_cast<double>(original)));
            target = std::min(target, original - 1);
            const std::size_t want = std::max(dead_before[l], target);
            std::size_t dead = 0;
            for (std::size_t i = 0; i < original; ++i) {
                if (mask.layers[l].unit_alive[i] == 0) {
                    ++dead;
                    // A dead unit's synapse row must be dead too.
                    const std::size_t cols =
                        mask.layers[l].syn_alive.size() / original;
                    for (std::size_t j = 0; j < cols; ++j) {
                        if (mask.layers[l].syn_alive[i * cols + j] != 0) {
                            why = "dead unit with live synapses";
                            return false;
                        }
                    }
                }
            }
            if (dead != want) {
                why = "dead count " + std::to_string(dead) + " != target " +
                      std::to_string(want);
                return false;
            }
        }
        // Output layer untouched.
        for (std::uint8_t a : mask.layers[layers - 1].unit_alive) {
            if (a == 0) {
                why = "output unit pruned";
                return false;
            }
        }
    }
    return true;
}

bool dead_unit_silence(Rng& rng, std::string& why) {
    const char* archs[] = {"Input-6FC-4FC-3FC", "Input-3C3-4FC",
                           "Input-2C3-AvgPool2-5FC-3FC"};
    for (int round = 0; round < 30; ++round) {
        const std::string arch = archs[rng.below(3)];
        NetworkSpec spec;
        spec.layers = parse_architecture(arch);
        spec.in_channels = 1;
        spec.in_height = 6;
        spec.in_width = 6;
        spec.time_steps = 1 + static_cast<int>(rng.below(3));
        spec.validate();
        const Network net(spec);

        Parameters params = make_parameters(net.shape());
        Rng init(rng.next_u64());
        init_parameters(params, init);
        StructureMask mask = make_all_alive_mask(params);
        // Kill random non-output units (keep at least one alive per layer).
        for (std::size_t wl = 0; wl + 1 < mask.layers.size(); ++wl) {
            MaskLayer& ml = mask.layers[wl];
            const std::size_t rows = ml.unit_alive.size();
            const std::size_t cols = ml.syn_alive.size() / rows;
            for (std::size_t i = 0; i + 1 < rows; ++i) {
                if (rng.below(3) == 0) {
                    ml.unit_alive[i] = 0;
                    std::fill(ml.syn_alive.begin() +
                                  static_cast<std::ptrdiff_t>(i * cols),
                              ml.syn_alive.begin() +
                                  static_cast<std::ptrdiff_t>((i + 1) * cols),
                              static_cast<std::uint8_t>(0));
                }
            }
        }

        const int batch = 2;
        const std::size_t frame = net.shape().input.activation_size();
        std::vector<double> input(static_cast<std::size_t>(batch) *
                                  spec.time_steps * frame);
        for (double& v : input) v = rng.uniform();
        ForwardCache cache;
        net.forward_pass(params, mask, input.data(), batch, cache);

        // Every dead unit must be silent at every step for every sample.
        std::size_t wl = 0;
        for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l) {
            const LayerSpec& ls = spec.layers[l];
            const std::size_t act = net.shape().layers[l].activation_size();
            if (!ls.weighted()) continue;
            const MaskLayer& ml = mask.layers[wl];
            const std::size_t rows = ml.unit_alive.size();
            const std::size_t per_unit = act / rows;  // channel plane or 1
            for (std::size_t u = 0; u < rows; ++u) {
                if (ml.unit_alive[u] != 0) continue;
                for (int tt = 0; tt < spec.time_steps; ++tt) {
                    for (int s = 0; s < batch; ++s) {
                        for (std::size_t j = 0; j < per_unit; ++j) {
                            const std::size_t i = u * per_unit + j;
                            const double x =
                                ls.kind == LayerKind::fc
                                    ? cache.act[l][tt][i * batch +
                                                       static_cast<std::size_t>(
                                                           s)]
                                    : cache.act[l][tt]
                                               [static_cast<std::size_t>(s) *
                                                    act +
                                                i];
                            if (x != 0.0) {
                                why = "dead unit spiked in " + arch;
                                return false;
                            }
                        }
                    }
                }
            }
            ++wl;
        }
    }
    return true;
}

bool revived_weight_is_zero(Rng& rng, std::string& why) {
    for (int round = 0; round < 50; ++round) {
        const std::size_t rows = 2 + rng.below(4);
        const std::size_t cols = 2 + rng.below(6);
        Parameters params;
        params.layers.resize(1);
        params.layers[0].rows = rows;
        params.layers[0].cols = cols;
        params.layers[0].w.resize(rows * cols);
        params.layers[0].b.assign(rows, 0.0);
        for (double& v : params.layers[0].w) v = rng.uniform(-1.0, 1.0);

        StructureMask mask = make_all_alive_mask(params);
        for (std::size_t i = 0; i < rows * cols; ++i) {
            if (rng.below(3) == 0) mask.layers[0].syn_alive[i] = 0;
        }
        // The trainer pins dead weights to zero after every mask change.
        Parameters pinned = params;
        apply_mask(params, mask, pinned);
        params = pinned;

        SynapseBounds bounds = init_boundaries(params);
        RegenState regen = make_regen_state(params, 99.0, 1.1, 1);

        Gradients grads = params;
        for (int step = 0; step < 3; ++step) {
            for (double& g : grads.layers[0].w) g = rng.uniform(0.5, 1.0);
            regenerate_step(grads, mask, regen, bounds);
        }
        // With rho_g = 99 every dead synapse is hit each epoch, so after
        // 3 steps with t_num = 1 everything revived; weights must still be 0.
        for (std::size_t i = 0; i < rows * cols; ++i) {
            if (mask.layers[0].syn_alive[i] == 0) {
                why = "synapse failed to revive under saturation";
                return false;
            }
        }
        for (std::size_t i = 0; i < rows * cols; ++i) {
            const bool was_dead = pinned.layers[0].w[i] == 0.0;
            if (was_dead && params.layers[0].w[i] != 0.0) {
                why = "revived synapse carries a non-zero weight";
                return false;
            }
        }
    }
    return true;
}

bool compression_monotonicity(Rng& rng, std::string& why) {
    for (int round = 0; round < 50; ++round) {
        Parameters params;
        params.layers.resize(2);
        params.layers[0].rows = 6;
        params.layers[0].cols = 4;
        params.layers[1].rows = 3;
        params.layers[1].cols = 6;
        for (ParamLayer& l : params.layers) {
            l.w.resize(l.rows * l.cols);
            l.b.assign(l.rows, 0.0);
            for (double& v : l.w) v = rng.uniform(-1.0, 1.0);
        }
        StructureMask mask = make_all_alive_mask(params);
        SynapseBounds bounds = init_boundaries(params);
        RegenState regen = make_regen_state(params, 80.0, 1.1, 1);
        PruneSchedule sched;
        sched.rho_fc = 20.0;
        const std::vector<LayerKind> kinds{LayerKind::fc, LayerKind::fc};

        double prev = compression_rate(mask);
        for (int step = 0; step < 6; ++step) {
            sched.rho_fc = std::min(95.0, sched.rho_fc + 15.0);
            std::vector<std::vector<double>> importance;
            for (std::size_t wl = 0; wl < 2; ++wl) {
                importance.push_back(neuron_importance(
                    bounds.layers[wl], mask.layers[wl], params.layers[wl].rows,
                    params.layers[wl].cols));
            }
            prune_step(importance, mask, sched, kinds);
            const double after_prune = compression_rate(mask);
            if (after_prune < prev) {
                why = "pruning decreased compression";
                return false;
            }
            Gradients grads = params;
            for (ParamLayer& gl : grads.layers) {
                for (double& g : gl.w) g = rng.uniform(0.0, 1.0);
            }
            regenerate_step(grads, mask, regen, bounds);
            const double after_regen = compression_rate(mask);
            if (after_regen > after_prune) {
                why = "regeneration increased compression";
                return false;
            }
            prev = after_regen;
        }
    }
    return true;
}

bool resume_determinism(const fs::path& out_root, std::string& why) {
    ExperimentConfig cfg;
    cfg.arch = "Input-4C3-AvgPool2-10FC-3FC";
    cfg.in_height = 8;
    cfg.in_width = 8;
    cfg.time_steps = 2;
    cfg.v_th = 0.3;
    cfg.epochs = 4;
    cfg.batch_size = 20;
    cfg.seed = 3;
    cfg.mode = Mode::full;
    cfg.t_num = 1;
    cfg.regen_t_num = 1;
    cfg.start_epoch = 1;
    cfg.mid_epoch = 3;
    cfg.syn_classes = 3;
    cfg.syn_train = 40;
    cfg.syn_test = 20;
    cfg.syn_height = 8;
    cfg.syn_width = 8;
    cfg.syn_noise = 0.25;
    cfg.syn_seed = 5;

    cfg.out_dir = (out_root / "resume_ref").string();
    const TrainResult full = run_training(cfg);

    ExperimentConfig half = cfg;
    half.epochs = 2;
    half.out_dir = (out_root / "resume_half").string();
    const TrainResult first = run_training(half);

    TrainingState state = checkpoint_load(first.checkpoint_path);
    state.cfg.epochs = 4;
    state.cfg.out_dir = (out_root / "resume_cont").string();
    const std::string entry = (out_root / "resume_entry.bin").string();
    checkpoint_save(state, entry);
    const TrainResult rest = resume_training(entry);

    if (rest.metrics.size() != 2) {
        why = "resume ran an unexpected number of epochs";
        return false;
    }
    for (std::size_t i = 0; i < 2; ++i) {
        EpochMetrics a = full.metrics[i + 2];
        EpochMetrics b = rest.metrics[i];
        a.wall_s = 0.0;
        b.wall_s = 0.0;
        if (metrics_row(a) != metrics_row(b)) {
            why = "resumed epoch " + std::to_string(b.epoch) +
                  " diverged from the uninterrupted run";
            return false;
        }
    }
    const TrainingState end_a = checkpoint_load(full.checkpoint_path);
    const TrainingState end_b = checkpoint_load(rest.checkpoint_path);
    for (std::size_t l = 0; l < end_a.params.layers.size(); ++l) {
        if (end_a.params.layers[l].w != end_b.params.layers[l].w ||
            end_a.params.layers[l].b != end_b.params.layers[l].b) {
            why = "final weights differ after resume";
            return false;
        }
    }
    return true;
}

void structural_invariants_criterion(const fs::path& out_root) {
    const char* name = "structural-invariants";
    Timer timer;
    Rng rng(0x5D5A11);
    std::string why;
    bool ok = prune_count_exactness(rng, why) && dead_unit_silence(rng, why) &&
              revived_weight_is_zero(rng, why) &&
              compression_monotonicity(rng, why) &&
              resume_determinism(out_root, why);
    const double secs = timer.seconds();
    report(ok && secs < 60.0, name,
           ok ? "prune counts, dead-unit silence, revive-at-zero, "
                "monotonicity, resume determinism (" +
                    fmt1(secs) + " s, budget 60 s)"
              : why);
}

} // namespace

int main(int argc, char** argv) {
    const std::string config_dir = argc > 1 ? argv[1] : "configs";
    const fs::path out_root = fs::temp_directory_path() / "sdsnn_acceptance";
    std::error_code ec;
    fs::remove_all(out_root, ec);
    fs::create_directories(out_root);

    try {
        constraint_oracle_criterion();
        gradient_oracle_criterion();
        schedule_criterion();
        desk_criteria(config_dir, out_root);
        skip("mnist-full-scale",
             "optional long run (full-scale 15C3/40C3/300FC, 150 epochs); "
             "launch with ./sdsnn train --config configs/mnist_full.cfg after "
             "placing the MNIST IDX files as documented in README.md");
        structural_invariants_criterion(out_root);
    } catch (const std::exception& e) {
        report(false, "unhandled-exception", e.what());
    }

    std::printf("%d passed, %d failed, %d skipped\n", g_passes, g_failures,
                g_skips);
    return g_failures == 0 ? 0 : 1;
}
