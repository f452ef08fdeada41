#include "sdsnn/net.hpp"

#include "sdsnn/errors.hpp"

#include <cctype>
#include <sstream>

namespace sdsnn {

std::string layer_kind_name(LayerKind kind) {
    switch (kind) {
    case LayerKind::conv:
        return "conv";
    case LayerKind::avgpool:
        return "avgpool";
    case LayerKind::maxpool:
        return "maxpool";
    case LayerKind::fc:
        return "fc";
    }
    return "unknown";
}

void NetworkSpec::validate() const {
    require(!layers.empty(), "network has no layers");
    require(in_channels >= 1 && in_height >= 1 && in_width >= 1,
            "input shape must be positive");
    require(time_steps >= 1, "time_steps must be >= 1");
    require(tau >= 0.0 && tau < 1.0, "tau must satisfy 0 <= tau < 1");
    require(a > 0.0, "surrogate width a must be > 0");
    require(v_th > 0.0, "v_th must be > 0");
    require(layers.back().kind == LayerKind::fc,
            "final layer must be fc (class scores)");
    bool any_weighted = false;
    for (const LayerSpec& layer : layers) {
        switch (layer.kind) {
        case LayerKind::conv:
            require(layer.out_channels >= 1, "conv out_channels must be >= 1");
            require(layer.kernel_size >= 1, "conv kernel_size must be >= 1");
            require(layer.stride >= 1, "conv stride must be >= 1");
            require(layer.padding >= 0, "conv padding must be >= 0");
            any_weighted = true;
            break;
        case LayerKind::avgpool:
        case LayerKind::maxpool:
            require(layer.window >= 1, "pool window must be >= 1");
            require(layer.stride >= 1, "pool stride must be >= 1");
            break;
        case LayerKind::fc:
            require(layer.out_units >= 1, "fc out_units must be >= 1");
            any_weighted = true;
            break;
        }
    }
    require(any_weighted, "network needs at least one weighted layer");
}

namespace {

bool parse_int(const std::string& text, int& out) {
    if (text.empty()) return false;
    int value = 0;
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        value = value * 10 + (c - '0');
        if (value > 1'000'000) return false;
    }
    out = value;
    return true;
}

LayerSpec parse_token(const std::string& token) {
    LayerSpec layer;
    if (token.rfind("AvgPool", 0) == 0 || token.rfind("MaxPool", 0) == 0) {
        layer.kind = token[0] == 'A' ? LayerKind::avgpool : LayerKind::maxpool;
        int window = 0;
        if (!parse_int(token.substr(7), window) || window < 1) {
            throw ParseError("bad pool token '" + token + "' in architecture");
        }
        layer.window = window;
        layer.stride = window;
        return layer;
    }
    if (token.size() > 2 && token.compare(token.size() - 2, 2, "FC") == 0) {
        int units = 0;
        if (!parse_int(token.substr(0, token.size() - 2), units) || units < 1) {
            throw ParseError("bad fc token '" + token + "' in architecture");
        }
        layer.kind = LayerKind::fc;
        layer.out_units = units;
        return layer;
    }
    const std::size_t c_pos = token.find('C');
    if (c_pos != std::string::npos && c_pos > 0 && c_pos + 1 < token.size()) {
        int channels = 0;
        int kernel = 0;
        if (parse_int(token.substr(0, c_pos), channels) &&
            parse_int(token.substr(c_pos + 1), kernel) && channels >= 1 &&
            kernel >= 1) {
            layer.kind = LayerKind::conv;
            layer.out_channels = channels;
            layer.kernel_size = kernel;
            layer.stride = 1;
            layer.padding = kernel / 2;
            return layer;
        }
    }
    throw ParseError("unrecognized architecture token '" + token + "'");
}

} // namespace

std::vector<LayerSpec> parse_architecture(const std::string& arch) {
    if (!arch.empty() && arch.back() == '-') {
        throw ParseError("architecture string '" + arch +
                         "' ends with a dangling '-'");
    }
    std::vector<LayerSpec> layers;
    std::stringstream stream(arch);
    std::string token;
    while (std::getline(stream, token, '-')) {
        if (token.empty()) {
            throw ParseError("empty token in architecture string '" + arch +
                             "'");
        }
        if (token == "Input" || token == "Flatten") {
            continue;
        }
        layers.push_back(parse_token(token));
    }
    if (layers.empty()) {
        throw ParseError("architecture string '" + arch + "' has no layers");
    }
    return layers;
}

std::size_t NetworkShape::total_synapses() const {
    std::size_t total = 0;
    for (std::size_t idx : weighted) {
        total += layers[idx].weight_count();
    }
    return total;
}

NetworkShape compute_shape(const NetworkSpec& spec) {
    spec.validate();
    NetworkShape shape;
    shape.input.channels = spec.in_channels;
    shape.input.height = spec.in_height;
    shape.input.width = spec.in_width;

    LayerGeom prev = shape.input;
    bool flat = false;  // set once an fc layer has been seen
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& layer = spec.layers[l];
        LayerGeom geom;
        switch (layer.kind) {
        case LayerKind::conv: {
            require(!flat, "conv layer after fc is not supported");
            const int oh = (prev.height + 2 * layer.padding - layer.kernel_size) /
                               layer.stride + 1;
            const int ow = (prev.width + 2 * layer.padding - layer.kernel_size) /
                               layer.stride + 1;
            require(oh >= 1 && ow >= 1, "conv output collapses to zero extent");
            geom.channels = layer.out_channels;
            geom.height = oh;
            geom.width = ow;
            geom.units = static_cast<std::size_t>(layer.out_channels);
            geom.fan_in = static_cast<std::size_t>(prev.channels) *
                          layer.kernel_size * layer.kernel_size;
            shape.weighted.push_back(l);
            break;
        }
        case LayerKind::avgpool:
        case LayerKind::maxpool: {
            require(!flat, "pool layer after fc is not supported");
            require(prev.height >= layer.window && prev.width >= layer.window,
                    "pool window exceeds the input extent");
            const int oh = (prev.height - layer.window) / layer.stride + 1;
            const int ow = (prev.width - layer.window) / layer.stride + 1;
            require(oh >= 1 && ow >= 1, "pool output collapses to zero extent");
            geom.channels = prev.channels;
            geom.height = oh;
            geom.width = ow;
            break;
        }
        case LayerKind::fc: {
            geom.channels = layer.out_units;
            geom.height = 1;
            geom.width = 1;
            geom.units = static_cast<std::size_t>(layer.out_units);
            geom.fan_in = prev.activation_size();
            shape.weighted.push_back(l);
            flat = true;
            break;
        }
        }
        shape.layers.push_back(geom);
        prev = geom;
    }
    return shape;
}

} // namespace sdsnn
