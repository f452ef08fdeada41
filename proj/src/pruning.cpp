#include "sdsnn/pruning.hpp"

#include "sdsnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdsnn {

void PruneSchedule::validate() const {
    require(rho_cap >= 0.0 && rho_cap < 100.0, "rho_cap must lie in [0, 100)");
    require(rho_conv >= 0.0 && rho_conv <= rho_cap,
            "rho_conv must lie in [0, rho_cap]");
    require(rho_fc >= 0.0 && rho_fc <= rho_cap,
            "rho_fc must lie in [0, rho_cap]");
    require(start_epoch < mid_epoch, "start_epoch must precede mid_epoch");
    require(alpha <= 1.0 && beta <= 1.0, "alpha and beta must be <= 1");
    for (double rho : rho_layers) {
        require(rho >= 0.0 && rho <= rho_cap,
                "per-layer rho must lie in [0, rho_cap]");
    }
}

void PruneSchedule::init_per_layer(const std::vector<LayerKind>& weighted_kinds) {
    rho_layers.assign(weighted_kinds.size(), 0.0);
    for (std::size_t wl = 0; wl < weighted_kinds.size(); ++wl) {
        rho_layers[wl] =
            (weighted_kinds[wl] == LayerKind::conv) ? rho_conv : rho_fc;
    }
}

double PruneSchedule::rate_for(std::size_t wl, LayerKind kind) const {
    if (per_layer) {
        require(wl < rho_layers.size(), "per-layer rho not initialized");
        return rho_layers[wl];
    }
    return kind == LayerKind::conv ? rho_conv : rho_fc;
}

std::vector<double> neuron_importance(const BoundsLayer& bounds,
                                      const MaskLayer& mask, std::size_t rows,
                                      std::size_t cols) {
    require(bounds.size() == rows * cols &&
                mask.syn_alive.size() == rows * cols &&
                mask.unit_alive.size() == rows,
            "importance inputs disagree in shape");
    std::vector<double> importance(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double d = 0.0;
        const std::size_t base = i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (mask.syn_alive[base + j] != 0) {
                d += bounds.r_pos[base + j] - bounds.r_neg[base + j];
            }
        }
        importance[i] = d;
    }
    return importance;
}

double delta_schedule(int epoch, const PruneSchedule& sched) {
    require(epoch >= sched.start_epoch,
            "delta_schedule queried before start_epoch");
    if (epoch <= sched.mid_epoch) {
        return sched.alpha *
               std::exp(-static_cast<double>(epoch - sched.start_epoch));
    }
    return sched.beta;
}

namespace {

// Deepest prunable layer of `kind` (the output layer is excluded).
std::ptrdiff_t deepest_of_kind(const std::vector<LayerKind>& kinds,
                               LayerKind kind) {
    for (std::ptrdiff_t wl = static_cast<std::ptrdiff_t>(kinds.size()) - 2;
         wl >= 0; --wl) {
        if (kinds[wl] == kind) return wl;
    }
    return -1;
}

double bumped(double rho, double delta, std::size_t n_l, std::size_t n_next,
              double cap) {
    require(n_next > 0, "next layer is fully dead; cannot update prune rate");
    const double inc = delta * static_cast<double>(n_l) /
                       static_cast<double>(n_next);
    return std::min(rho + inc, cap);
}

} // namespace

void update_prune_rates(PruneSchedule& sched, int epoch,
                        const std::vector<std::size_t>& alive_counts,
                        const std::vector<LayerKind>& weighted_kinds) {
    require(alive_counts.size() == weighted_kinds.size(),
            "alive counts and layer kinds disagree");
    require(weighted_kinds.size() >= 2,
            "rate update needs at least one prunable layer plus the output");
    const double delta = delta_schedule(epoch, sched);
    if (sched.per_layer) {
        require(sched.rho_layers.size() == weighted_kinds.size(),
                "per-layer rho not initialized");
        for (std::size_t wl = 0; wl + 1 < weighted_kinds.size(); ++wl) {
            sched.rho_layers[wl] =
                bumped(sched.rho_layers[wl], delta, alive_counts[wl],
                       alive_counts[wl + 1], sched.rho_cap);
        }
        return;
    }
    const std::ptrdiff_t conv_l = deepest_of_kind(weighted_kinds, LayerKind::conv);
    if (conv_l >= 0) {
        sched.rho_conv = bumped(sched.rho_conv, delta, alive_counts[conv_l],
                                alive_counts[conv_l + 1], sched.rho_cap);
    }
    const std::ptrdiff_t fc_l = deepest_of_kind(weighted_kinds, LayerKind::fc);
    if (fc_l >= 0) {
        sched.rho_fc = bumped(sched.rho_fc, delta, alive_counts[fc_l],
                              alive_counts[fc_l + 1], sched.rho_cap);
    }
}

PruneReport prune_step(const std::vector<std::vector<double>>& importance,
                       StructureMask& mask, const PruneSchedule& sched,
                       const std::vector<LayerKind>& weighted_kinds) {
    require(importance.size() == mask.layers.size() &&
                weighted_kinds.size() == mask.layers.size(),
            "prune inputs disagree in layer count");
    PruneReport report;
    for (std::size_t wl = 0; wl + 1 < mask.layers.size(); ++wl) {
        MaskLayer& ml = mask.layers[wl];
        const std::size_t original = ml.unit_alive.size();
        require(importance[wl].size() == original,
                "importance length does not match unit count");
        const double rho = sched.rate_for(wl, weighted_kinds[wl]);
        std::size_t target = static_cast<std::size_t>(
            std::floor(rho / 100.0 * static_cast<double>(original)));
        if (target >= original) {
            target = original - 1;
            report.floor_clamped = true;
        }
        std::size_t dead = 0;
        for (std::uint8_t alive : ml.unit_alive) {
            if (alive == 0) ++dead;
        }
        if (dead >= target) continue;

        std::vector<std::size_t> alive_units;
        alive_units.reserve(original - dead);
        for (std::size_t i = 0; i < original; ++i) {
            if (ml.unit_alive[i] != 0) alive_units.push_back(i);
        }
        // Ascending importance, ascending index on ties.
        std::stable_sort(alive_units.begin(), alive_units.end(),
                         [&](std::size_t a, std::size_t b) {
                             if (importance[wl][a] != importance[wl][b]) {
                                 return importance[wl][a] < importance[wl][b];
                             }
                             return a < b;
                         });
        const std::size_t kill = std::min(target - dead, alive_units.size());
        const std::size_t cols = ml.syn_alive.size() / original;
        for (std::size_t r = 0; r < kill; ++r) {
            const std::size_t unit = alive_units[r];
            ml.unit_alive[unit] = 0;
            std::fill(ml.syn_alive.begin() +
                          static_cast<std::ptrdiff_t>(unit * cols),
                      ml.syn_alive.begin() +
                          static_cast<std::ptrdiff_t>((unit + 1) * cols),
                      static_cast<std::uint8_t>(0));
            report.killed_units += 1;
        }
    }
    return report;
}

} // namespace sdsnn
