#pragma once

#include "sdsnn/constraint.hpp"
#include "sdsnn/model.hpp"
#include "sdsnn/net.hpp"

#include <vector>

namespace sdsnn {

// Adaptive structured-pruning schedule. rho values are percentages and act
// as CUMULATIVE dead-unit targets against each layer's ORIGINAL unit count.
// In shared mode (default) rho_conv governs every conv layer and rho_fc every
// hidden fc layer; with per_layer=true each prunable layer carries its own
// rate in rho_layers (indexed by weighted-layer ordinal).
struct PruneSchedule {
    double rho_conv = 10.0;
    double rho_fc = 35.0;
    double alpha = 1.0;
    double beta = 0.00075;
    int start_epoch = 36;
    int mid_epoch = 60;
    double rho_cap = 95.0;
    bool per_layer = false;
    std::vector<double> rho_layers;

    void validate() const;
    // Fills rho_layers from the per-kind values (used when per_layer is set).
    void init_per_layer(const std::vector<LayerKind>& weighted_kinds);
    // Current rate for prunable weighted layer `wl` of kind `kind`.
    double rate_for(std::size_t wl, LayerKind kind) const;
};

// D_i per output unit: sum of (r_pos - r_neg) over the unit's incoming ALIVE
// synapses. Units with no alive synapses score 0.
std::vector<double> neuron_importance(const BoundsLayer& bounds,
                                      const MaskLayer& mask, std::size_t rows,
                                      std::size_t cols);

// Fast-then-slow rate increment: alpha*exp(-(epoch-START)) while
// epoch <= MID, beta afterwards. epoch < START is a contract violation.
double delta_schedule(int epoch, const PruneSchedule& sched);

// Rate update using currently-alive unit counts: rho += delta * N^l / N^{l+1},
// clamped to rho_cap. Shared mode updates each kind once using that kind's
// deepest prunable layer; per-layer mode updates every prunable layer.
// weighted_kinds/alive_counts are indexed by weighted-layer ordinal; the last
// weighted layer is the output layer (never prunable, only a denominator).
void update_prune_rates(PruneSchedule& sched, int epoch,
                        const std::vector<std::size_t>& alive_counts,
                        const std::vector<LayerKind>& weighted_kinds);

struct PruneReport {
    std::size_t killed_units = 0;
    bool floor_clamped = false;  // a layer hit the >=1-alive-unit floor
};

// Kills the lowest-importance alive units (ties broken by ascending index)
// until each prunable layer's dead-unit count reaches
// floor(rho% * original units), capped to leave at least one unit alive.
// importance is indexed by weighted-layer ordinal; the output layer's entry
// is ignored.
PruneReport prune_step(const std::vector<std::vector<double>>& importance,
                       StructureMask& mask, const PruneSchedule& sched,
                       const std::vector<LayerKind>& weighted_kinds);

} // namespace sdsnn
