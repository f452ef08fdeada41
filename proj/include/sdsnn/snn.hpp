#pragma once

#include "sdsnn/model.hpp"
#include "sdsnn/net.hpp"

#include <vector>

namespace sdsnn {

// Everything the backward pass needs from a forward pass, plus reusable
// scratch so per-batch allocations settle after the first call.
//
// Buffer layouts: spatial layers (conv/pool and the encoded input) store
// activations sample-major as (batch, channels, H, W) flattened; fc layers
// store them column-major as (units, batch) so a whole batch is one GEMM.
struct ForwardCache {
    int batch = 0;
    std::vector<double> input;                       // (batch, T, C*H*W)
    std::vector<std::vector<std::vector<double>>> act;  // [layer][t]
    std::vector<std::vector<std::vector<double>>> pot;  // [layer][t], weighted only
    std::vector<double> logits;                      // (batch, classes)
    Parameters effective;                            // masked weights used

    // scratch
    std::vector<double> col, gather, zeros, current;
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Network {
public:
    explicit Network(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    const NetworkShape& shape() const { return shape_; }
    int class_count() const;

    // input: (batch, T, in_features) flattened row-major; every dead synapse
    // contributes exactly 0 current (masked weights). Fills cache.logits with
    // the mean output-layer membrane potential over T.
    void forward_pass(const Parameters& params, const StructureMask& mask,
                      const double* input, int batch, ForwardCache& cache) const;

    // dlogits: (batch, classes) row-major gradient of the loss w.r.t. logits.
    // Gradients are produced for masked-dead synapses too (regeneration reads
    // them); only the propagation THROUGH weights uses masked values.
    void backward_pass(const ForwardCache& cache, const StructureMask& mask,
                       const double* dlogits, Gradients& grads) const;

private:
    NetworkSpec spec_;
    NetworkShape shape_;
};

// Spec-level single-step LIF: u = tau*u_prev*(1-x_prev) + current,
// x = [u >= v_th]. Sizes must agree and x_prev must be binary.
void lif_step(const NetworkSpec& spec, const std::vector<double>& u_prev,
              const std::vector<double>& x_prev,
              const std::vector<double>& current, std::vector<double>& u,
              std::vector<double>& x);

// Rectangular surrogate: (1/a) * 1[|u - v_th| < a/2], elementwise.
void spike_surrogate_grad(const NetworkSpec& spec, const std::vector<double>& u,
                          std::vector<double>& g);

// Mean softmax cross-entropy over the batch; writes
// dlogits = (softmax - onehot)/batch into `dlogits` (resized as needed).
double softmax_cross_entropy(const std::vector<double>& logits,
                             const std::vector<int>& labels, int batch,
                             int classes, std::vector<double>& dlogits);

// Adam over alive synapses/units; dead entries stay exactly 0 (weight and
// moments). Throws TrainingAbort when any gradient is non-finite.
void optimizer_step(Parameters& params, const Gradients& grads,
                    const StructureMask& mask, AdamState& state,
                    const AdamConfig& cfg);

} // namespace sdsnn
