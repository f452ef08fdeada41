#include "sdsnn/constraint.hpp"

#include "sdsnn/errors.hpp"
#include "sdsnn/kernels.hpp"

#include <cmath>

namespace sdsnn {

void BoundsLayer::clear_synapse(std::size_t idx) {
    n_pos[idx] = 0;
    n_neg[idx] = 0;
    n_decay[idx] = 0;
    c_pos[idx] = 0.0;
    c_neg[idx] = 0.0;
}

void ConstraintConfig::validate() const {
    require(t_num >= 1, "constraint t_num must be >= 1");
    require(epsilon > 0.0 && epsilon < 1.0,
            "constraint epsilon must lie in (0, 1)");
}

SynapseBounds init_boundaries(const Parameters& params) {
    SynapseBounds bounds;
    bounds.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const std::vector<double>& w = params.layers[l].w;
        double max_abs = 0.0;
        for (double v : w) {
            max_abs = std::max(max_abs, std::fabs(v));
        }
        BoundsLayer& bl = bounds.layers[l];
        bl.r_pos.assign(w.size(), max_abs);
        bl.r_neg.assign(w.size(), -max_abs);
        bl.n_pos.assign(w.size(), 0);
        bl.n_neg.assign(w.size(), 0);
        bl.n_decay.assign(w.size(), 0);
        bl.c_pos.assign(w.size(), 0.0);
        bl.c_neg.assign(w.size(), 0.0);
    }
    return bounds;
}

void apply_constraint(Parameters& w_curr, const Parameters& w_prev,
                      SynapseBounds& bounds, const ConstraintConfig& cfg) {
    cfg.validate();
    require(w_curr.layers.size() == w_prev.layers.size() &&
                w_curr.layers.size() == bounds.layers.size(),
            "constraint state layer counts disagree");
    const std::uint32_t t_num = static_cast<std::uint32_t>(cfg.t_num);
    for (std::size_t l = 0; l < w_curr.layers.size(); ++l) {
        ParamLayer& pl = w_curr.layers[l];
        const ParamLayer& pp = w_prev.layers[l];
        BoundsLayer& bl = bounds.layers[l];
        require(pp.w.size() == pl.w.size() && bl.size() == pl.w.size(),
                "constraint state shapes disagree");
        for (std::size_t i = 0; i < pl.w.size(); ++i) {
            double w = pl.w[i];
            const bool decayed = std::fabs(w) < std::fabs(pp.w[i]);

            if (w > bl.r_pos[i]) {
                bl.n_pos[i] += 1;
                bl.c_pos[i] += w - bl.r_pos[i];
                w = bl.r_pos[i];
            } else {
                bl.n_pos[i] = 0;
                bl.c_pos[i] = 0.0;
            }
            if (w < bl.r_neg[i]) {
                bl.n_neg[i] += 1;
                bl.c_neg[i] += bl.r_neg[i] - w;
                w = bl.r_neg[i];
            } else {
                bl.n_neg[i] = 0;
                bl.c_neg[i] = 0.0;
            }
            if (decayed) {
                bl.n_decay[i] += 1;
            } else {
                bl.n_decay[i] = 0;
            }

            if (bl.n_pos[i] > t_num) {
                bl.r_pos[i] += bl.c_pos[i] / static_cast<double>(t_num);
                bl.n_pos[i] = 0;
                bl.c_pos[i] = 0.0;
            }
            if (bl.n_neg[i] > t_num) {
                bl.r_neg[i] -= bl.c_neg[i] / static_cast<double>(t_num);
                bl.n_neg[i] = 0;
                bl.c_neg[i] = 0.0;
            }
            if (bl.n_decay[i] > t_num) {
                bl.r_pos[i] *= cfg.epsilon;
                bl.r_neg[i] *= cfg.epsilon;
                bl.n_decay[i] = 0;
                // Contraction can strand the weight outside the shrunk
                // interval; restore the post-constraint invariant.
                if (w > bl.r_pos[i]) w = bl.r_pos[i];
                if (w < bl.r_neg[i]) w = bl.r_neg[i];
            }
            pl.w[i] = w;
        }
    }
}

std::vector<double> synapse_range(const BoundsLayer& bounds) {
    std::vector<double> range(bounds.size(), 0.0);
    kernels::sub(range.data(), bounds.r_pos.data(), bounds.r_neg.data(),
                 bounds.size());
    return range;
}

} // namespace sdsnn
