#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sdsnn {

enum class LayerKind { conv, avgpool, maxpool, fc };

std::string layer_kind_name(LayerKind kind);

// One entry in the architecture list. Field use depends on `kind`:
// conv uses out_channels/kernel_size/stride/padding, pools use window/stride,
// fc uses out_units.
struct LayerSpec {
    LayerKind kind = LayerKind::fc;
    int out_channels = 0;
    int kernel_size = 0;
    int stride = 1;
    int padding = 0;
    int window = 0;
    int out_units = 0;

    bool weighted() const {
        return kind == LayerKind::conv || kind == LayerKind::fc;
    }
    // Unit count N^l: channels for conv, neurons for fc, 0 for pools.
    int unit_count() const {
        if (kind == LayerKind::conv) return out_channels;
        if (kind == LayerKind::fc) return out_units;
        return 0;
    }
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    int in_channels = 1;
    int in_height = 0;
    int in_width = 0;
    int time_steps = 8;
    double tau = 0.2;
    double v_th = 0.5;
    double a = 1.0;

    // Throws ContractError when any structural invariant fails (final layer
    // must be fc, T >= 1, 0 <= tau < 1, a > 0, v_th > 0, positive sizes).
    void validate() const;
};

// Parses architecture strings such as
// "Input-15C3-AvgPool2-40C3-AvgPool2-Flatten-300FC-10FC".
// "Input"/"Flatten" tokens are accepted and ignored; <n>C<k> is a conv layer
// (stride 1, padding k/2), AvgPool<w>/MaxPool<w> pool with stride = window,
// <n>FC is a fully connected layer. Throws ParseError on malformed tokens.
std::vector<LayerSpec> parse_architecture(const std::string& arch);

// Resolved activation geometry for one layer.
struct LayerGeom {
    int channels = 0;
    int height = 0;
    int width = 0;
    // For weighted layers: units (= rows) and fan-in (= cols) of the flat
    // weight matrix; zero for pools.
    std::size_t units = 0;
    std::size_t fan_in = 0;

    std::size_t activation_size() const {
        return static_cast<std::size_t>(channels) * height * width;
    }
    std::size_t weight_count() const { return units * fan_in; }
};

struct NetworkShape {
    LayerGeom input;                 // geometry of the encoded input
    std::vector<LayerGeom> layers;   // one per LayerSpec, same order
    std::vector<std::size_t> weighted;  // indices into layers for conv/fc

    std::size_t total_synapses() const;
};

// Computes per-layer output shapes. Conv output extent is
// (in + 2*padding - kernel)/stride + 1; pools use (in - window)/stride + 1.
// Throws ContractError when any extent falls below 1 or an fc layer is
// followed by a spatial layer.
NetworkShape compute_shape(const NetworkSpec& spec);

} // namespace sdsnn
