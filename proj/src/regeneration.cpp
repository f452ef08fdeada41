#include "sdsnn/regeneration.hpp"

#include "sdsnn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sdsnn {

void RegenState::validate() const {
    require(rho_g >= 0.0 && rho_g <= 99.0, "rho_g must lie in [0, 99]");
    require(gamma > 1.0, "gamma must be > 1");
    require(t_num >= 1, "regeneration t_num must be >= 1");
}

RegenState make_regen_state(const Parameters& params, double rho_g0,
                            double gamma, int t_num) {
    RegenState state;
    state.rho_g = rho_g0;
    state.gamma = gamma;
    state.t_num = t_num;
    state.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        state.layers[l].t_g.assign(params.layers[l].synapse_count(), 0);
    }
    state.validate();
    return state;
}

void update_regen_rate(RegenState& state, int epoch, int start_epoch) {
    require(epoch > start_epoch,
            "regeneration rate updates begin after start_epoch");
    state.rho_g = std::min(
        state.rho_g + std::pow(state.gamma,
                               static_cast<double>(epoch - start_epoch)),
        99.0);
}

RegenReport regenerate_step(const Gradients& mean_abs_grads,
                            StructureMask& mask, RegenState& state,
                            SynapseBounds& bounds) {
    state.validate();
    require(mean_abs_grads.layers.size() == mask.layers.size() &&
                state.layers.size() == mask.layers.size() &&
                bounds.layers.size() == mask.layers.size(),
            "regeneration inputs disagree in layer count");

    RegenReport report;
    std::size_t total = 0;
    std::size_t dead = 0;
    for (std::size_t l = 0; l < mask.layers.size(); ++l) {
        require(mean_abs_grads.layers[l].w.size() ==
                    mask.layers[l].syn_alive.size(),
                "gradient shape does not match mask");
        total += mask.layers[l].syn_alive.size();
        for (std::uint8_t alive : mask.layers[l].syn_alive) {
            if (alive == 0) ++dead;
        }
    }
    if (dead == 0 || total == 0) {
        return report;  // nothing to regenerate
    }

    // g* = (100 - rho_g) percentile of |grad| pooled over every synapse.
    std::vector<double> pooled;
    pooled.reserve(total);
    for (const ParamLayer& gl : mean_abs_grads.layers) {
        for (double g : gl.w) {
            pooled.push_back(std::fabs(g));
        }
    }
    const double q = 100.0 - state.rho_g;
    std::size_t k = 0;
    {
        const double pos = std::ceil(q / 100.0 * static_cast<double>(total));
        if (pos >= 1.0) {
            k = static_cast<std::size_t>(pos) - 1;
        }
        k = std::min(k, total - 1);
    }
    std::nth_element(pooled.begin(),
                     pooled.begin() + static_cast<std::ptrdiff_t>(k),
                     pooled.end());
    const double g_star = pooled[k];
    report.threshold = g_star;

    const std::uint32_t t_num = static_cast<std::uint32_t>(state.t_num);
    for (std::size_t l = 0; l < mask.layers.size(); ++l) {
        MaskLayer& ml = mask.layers[l];
        RegenLayer& rl = state.layers[l];
        const std::vector<double>& g = mean_abs_grads.layers[l].w;
        const std::size_t rows = ml.unit_alive.size();
        const std::size_t cols = ml.syn_alive.size() / rows;
        for (std::size_t i = 0; i < ml.syn_alive.size(); ++i) {
            if (ml.syn_alive[i] != 0) {
                rl.t_g[i] = 0;
                continue;
            }
            if (std::fabs(g[i]) >= g_star) {
                rl.t_g[i] += 1;
            } else {
                rl.t_g[i] = 0;
            }
            if (rl.t_g[i] > t_num) {
                ml.syn_alive[i] = 1;
                rl.t_g[i] = 0;
                bounds.layers[l].clear_synapse(i);
                report.revived_synapses += 1;
                const std::size_t unit = i / cols;
                if (ml.unit_alive[unit] == 0) {
                    ml.unit_alive[unit] = 1;
                    report.revived_units += 1;
                }
            }
        }
    }
    return report;
}

} // namespace sdsnn
