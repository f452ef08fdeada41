#pragma once

#include "sdsnn/constraint.hpp"
#include "sdsnn/model.hpp"

#include <cstdint>
#include <vector>

namespace sdsnn {

// Per-layer consecutive-hit counters T_g (rows*cols, nonzero only for dead
// synapses).
struct RegenLayer {
    std::vector<std::uint32_t> t_g;
};

struct RegenState {
    double rho_g = 1.0;   // percent
    double gamma = 1.1;
    int t_num = 18;
    std::vector<RegenLayer> layers;

    void validate() const;  // 0 <= rho_g <= 99, gamma > 1, t_num >= 1
};

RegenState make_regen_state(const Parameters& params, double rho_g0,
                            double gamma, int t_num);

// rho_g += gamma^(epoch - start_epoch), capped at 99. Calling it at or before
// start_epoch is a contract violation (regeneration begins after START).
void update_regen_rate(RegenState& state, int epoch, int start_epoch);

struct RegenReport {
    std::size_t revived_synapses = 0;
    std::size_t revived_units = 0;
    double threshold = 0.0;  // g*, the (100 - rho_g) percentile
};

// One epoch of gradient-triggered regeneration. mean_abs_grads carries the
// epoch-mean |gradient| per synapse (same layout as Parameters). The
// threshold g* is the (100 - rho_g) percentile over ALL synapses pooled
// network-wide (k-th ascending order statistic, k = ceil(q/100*n) - 1). Each
// dead synapse's streak t_g increments when its |grad| >= g*, else resets;
// a streak strictly exceeding t_num revives the synapse: syn_alive set, its
// unit marked alive, boundary counters cleared, t_g reset. Weights/moments of
// dead synapses are pinned to 0 elsewhere, so a revived synapse restarts at
// weight exactly 0 with its boundaries retained.
RegenReport regenerate_step(const Gradients& mean_abs_grads,
                            StructureMask& mask, RegenState& state,
                            SynapseBounds& bounds);

} // namespace sdsnn
