#pragma once

#include "sdsnn/net.hpp"
#include "sdsnn/rng.hpp"

#include <cstdint>
#include <vector>

namespace sdsnn {

// Flat weight storage for one weighted layer. Conv weights are stored as
// rows = out_channels, cols = in_channels*k*k (row-major, col index ordered
// in_channel-major then kernel row then kernel col); fc weights are
// rows = out_units, cols = in_features.
struct ParamLayer {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> w;  // rows * cols
    std::vector<double> b;  // rows

    std::size_t synapse_count() const { return rows * cols; }
};

// One entry per weighted layer, ordered as NetworkShape::weighted.
struct Parameters {
    std::vector<ParamLayer> layers;
};

// Gradients share the Parameters layout exactly.
using Gradients = Parameters;

struct MaskLayer {
    std::vector<std::uint8_t> unit_alive;  // rows
    std::vector<std::uint8_t> syn_alive;   // rows * cols
};

struct StructureMask {
    std::vector<MaskLayer> layers;

    std::size_t dead_synapses() const;
    std::size_t total_synapses() const;
};

struct AdamLayer {
    std::vector<double> m_w, v_w;  // rows * cols
    std::vector<double> m_b, v_b;  // rows
};

struct AdamState {
    std::vector<AdamLayer> layers;
    std::uint64_t step = 0;
};

// Allocates zeroed parameters matching the weighted layers of `shape`.
Parameters make_parameters(const NetworkShape& shape);

// Fan-in-scaled uniform init: every weight and bias of layer l is drawn from
// U(-bound, bound) with bound = sqrt(1/fan_in). Draw order is layer-major,
// weights before biases, row-major — pinned so seeds reproduce exactly.
void init_parameters(Parameters& params, Rng& rng);

StructureMask make_all_alive_mask(const Parameters& params);

AdamState make_adam_state(const Parameters& params);

// Effective weights: masked-dead synapses forced to exact 0. `effective`
// must already have the same shape as `params`.
void apply_mask(const Parameters& params, const StructureMask& mask,
                Parameters& effective);

// Alive output-unit count per weighted layer.
std::vector<std::size_t> alive_unit_counts(const StructureMask& mask);

// 100 * dead / total over all conv+fc synapses (biases excluded).
double compression_rate(const StructureMask& mask);

} // namespace sdsnn
