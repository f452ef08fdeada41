#pragma once

#include "sdsnn/model.hpp"

#include <cstdint>
#include <vector>

namespace sdsnn {

// Per-synapse boundary state for one weighted layer (SoA, rows*cols each).
struct BoundsLayer {
    std::vector<double> r_pos, r_neg;
    std::vector<std::uint32_t> n_pos, n_neg, n_decay;
    std::vector<double> c_pos, c_neg;

    std::size_t size() const { return r_pos.size(); }
    void clear_synapse(std::size_t idx);  // zero all counters/accumulators
};

struct SynapseBounds {
    std::vector<BoundsLayer> layers;
};

struct ConstraintConfig {
    int t_num = 18;
    double epsilon = 0.75;

    void validate() const;  // t_num >= 1, 0 < epsilon < 1
};

// Boundary init: every synapse of layer l gets r_pos = max|W| over that layer
// and r_neg = -max|W|; counters and accumulators start at zero. An all-zero
// layer degenerates to (0, 0) bounds.
SynapseBounds init_boundaries(const Parameters& params);

// One epoch-granularity application of the boundary algorithm. For each
// synapse, in order: decay comparison |w| < |w_prev| uses the PRE-clamp
// current weight; clamp against r_pos/r_neg while counting streaks and
// accumulating overshoot; expand a bound by its accumulated overshoot / t_num
// when its streak exceeds t_num (then reset that streak); contract both
// bounds by epsilon when the decay streak exceeds t_num (then reset it and
// re-clamp the weight into the shrunk interval). w_curr is clamped in place.
void apply_constraint(Parameters& w_curr, const Parameters& w_prev,
                      SynapseBounds& bounds, const ConstraintConfig& cfg);

// Range = r_pos - r_neg, elementwise; always >= 0.
std::vector<double> synapse_range(const BoundsLayer& bounds);

} // namespace sdsnn
