#include "sdsnn/model.hpp"

#include "sdsnn/errors.hpp"
#include "sdsnn/kernels.hpp"

#include <cmath>

namespace sdsnn {

std::size_t StructureMask::dead_synapses() const {
    std::size_t dead = 0;
    for (const MaskLayer& layer : layers) {
        for (std::uint8_t alive : layer.syn_alive) {
            if (alive == 0) ++dead;
        }
    }
    return dead;
}

std::size_t StructureMask::total_synapses() const {
    std::size_t total = 0;
    for (const MaskLayer& layer : layers) {
        total += layer.syn_alive.size();
    }
    return total;
}

Parameters make_parameters(const NetworkShape& shape) {
    Parameters params;
    params.layers.reserve(shape.weighted.size());
    for (std::size_t idx : shape.weighted) {
        const LayerGeom& geom = shape.layers[idx];
        ParamLayer layer;
        layer.rows = geom.units;
        layer.cols = geom.fan_in;
        layer.w.assign(layer.rows * layer.cols, 0.0);
        layer.b.assign(layer.rows, 0.0);
        params.layers.push_back(std::move(layer));
    }
    return params;
}

void init_parameters(Parameters& params, Rng& rng) {
    for (ParamLayer& layer : params.layers) {
        require(layer.cols > 0, "weighted layer with zero fan-in");
        const double bound = std::sqrt(1.0 / static_cast<double>(layer.cols));
        for (double& w : layer.w) {
            w = rng.uniform(-bound, bound);
        }
        for (double& b : layer.b) {
            b = rng.uniform(-bound, bound);
        }
    }
}

StructureMask make_all_alive_mask(const Parameters& params) {
    StructureMask mask;
    mask.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        mask.layers[l].unit_alive.assign(params.layers[l].rows, 1);
        mask.layers[l].syn_alive.assign(params.layers[l].synapse_count(), 1);
    }
    return mask;
}

AdamState make_adam_state(const Parameters& params) {
    AdamState state;
    state.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const std::size_t n = params.layers[l].synapse_count();
        state.layers[l].m_w.assign(n, 0.0);
        state.layers[l].v_w.assign(n, 0.0);
        state.layers[l].m_b.assign(params.layers[l].rows, 0.0);
        state.layers[l].v_b.assign(params.layers[l].rows, 0.0);
    }
    return state;
}

void apply_mask(const Parameters& params, const StructureMask& mask,
                Parameters& effective) {
    require(params.layers.size() == mask.layers.size() &&
                params.layers.size() == effective.layers.size(),
            "parameter/mask layer count mismatch");
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const ParamLayer& src = params.layers[l];
        ParamLayer& dst = effective.layers[l];
        require(dst.synapse_count() == src.synapse_count(),
                "effective parameter shape mismatch");
        kernels::masked_copy(dst.w.data(), src.w.data(),
                             mask.layers[l].syn_alive.data(), src.w.size());
        kernels::masked_copy(dst.b.data(), src.b.data(),
                             mask.layers[l].unit_alive.data(), src.b.size());
    }
}

std::vector<std::size_t> alive_unit_counts(const StructureMask& mask) {
    std::vector<std::size_t> counts;
    counts.reserve(mask.layers.size());
    for (const MaskLayer& layer : mask.layers) {
        std::size_t alive = 0;
        for (std::uint8_t flag : layer.unit_alive) {
            if (flag != 0) ++alive;
        }
        counts.push_back(alive);
    }
    return counts;
}

double compression_rate(const StructureMask& mask) {
    const std::size_t total = mask.total_synapses();
    if (total == 0) return 0.0;
    return 100.0 * static_cast<double>(mask.dead_synapses()) /
           static_cast<double>(total);
}

} // namespace sdsnn
