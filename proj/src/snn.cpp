#include "sdsnn/snn.hpp"

#include "sdsnn/errors.hpp"
#include "sdsnn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace sdsnn {

namespace {

// col row r = (c*k + kh)*k + kw, col column q = oy*ow + ox. Out-of-image taps
// contribute explicit 0.0 entries so the GEMM accumulation order (ascending r)
// is identical to a literal loop over (c, kh, kw) with zero padding.
void im2col(const double* x, int c_in, int h, int w, int k, int stride, int pad,
            int oh, int ow, double* col) {
    std::size_t r = 0;
    for (int c = 0; c < c_in; ++c) {
        const double* xc = x + static_cast<std::size_t>(c) * h * w;
        for (int kh = 0; kh < k; ++kh) {
            for (int kw = 0; kw < k; ++kw, ++r) {
                double* row = col + r * (static_cast<std::size_t>(oh) * ow);
                std::size_t q = 0;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * stride - pad + kh;
                    for (int ox = 0; ox < ow; ++ox, ++q) {
                        const int ix = ox * stride - pad + kw;
                        row[q] = (iy >= 0 && iy < h && ix >= 0 && ix < w)
                                     ? xc[iy * w + ix]
                                     : 0.0;
                    }
                }
            }
        }
    }
}

// Transpose of im2col: scatters column-space gradients back onto the image.
void col2im_add(const double* col, int c_in, int h, int w, int k, int stride,
                int pad, int oh, int ow, double* dx) {
    std::size_t r = 0;
    for (int c = 0; c < c_in; ++c) {
        double* dxc = dx + static_cast<std::size_t>(c) * h * w;
        for (int kh = 0; kh < k; ++kh) {
            for (int kw = 0; kw < k; ++kw, ++r) {
                const double* row = col + r * (static_cast<std::size_t>(oh) * ow);
                std::size_t q = 0;
                for (int oy = 0; oy < oh; ++oy) {
                    const int iy = oy * stride - pad + kh;
                    for (int ox = 0; ox < ow; ++ox, ++q) {
                        const int ix = ox * stride - pad + kw;
                        if (iy >= 0 && iy < h && ix >= 0 && ix < w) {
                            dxc[iy * w + ix] += row[q];
                        }
                    }
                }
            }
        }
    }
}

void check_binary(const double* x, std::size_t n, const char* where) {
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] != 0.0 && x[i] != 1.0) {
            throw ContractError(std::string("non-binary spike input to ") + where);
        }
    }
}

} // namespace

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    shape_ = compute_shape(spec_);
}

int Network::class_count() const {
    return spec_.layers.back().out_units;
}

void Network::forward_pass(const Parameters& params, const StructureMask& mask,
                           const double* input, int batch,
                           ForwardCache& cache) const {
    require(batch >= 1, "forward_pass needs batch >= 1");
    require(params.layers.size() == shape_.weighted.size(),
            "parameter layer count does not match network");
    require(mask.layers.size() == params.layers.size(),
            "mask layer count does not match network");
    for (std::size_t wl = 0; wl < params.layers.size(); ++wl) {
        const LayerGeom& geom = shape_.layers[shape_.weighted[wl]];
        require(params.layers[wl].rows == geom.units &&
                    params.layers[wl].cols == geom.fan_in,
                "parameter shape does not match network");
        require(mask.layers[wl].syn_alive.size() ==
                        params.layers[wl].synapse_count() &&
                    mask.layers[wl].unit_alive.size() == params.layers[wl].rows,
                "mask shape does not match network");
    }

    const int t_steps = spec_.time_steps;
    const std::size_t layer_count = spec_.layers.size();
    const std::size_t in_features = shape_.input.activation_size();
    const std::size_t b = static_cast<std::size_t>(batch);

    cache.batch = batch;
    cache.input.assign(input, input + b * t_steps * in_features);
    cache.act.resize(layer_count);
    cache.pot.resize(layer_count);

    if (cache.effective.layers.empty()) {
        cache.effective = params;
    }
    apply_mask(params, mask, cache.effective);

    // Scratch sizing.
    std::size_t max_buf = b * in_features;
    std::size_t max_col = 1;
    std::size_t max_fan = 1;
    for (std::size_t l = 0; l < layer_count; ++l) {
        const LayerGeom& geom = shape_.layers[l];
        max_buf = std::max(max_buf, b * geom.activation_size());
        if (spec_.layers[l].kind == LayerKind::conv) {
            max_col = std::max(max_col, geom.fan_in * geom.height * geom.width);
        }
        if (spec_.layers[l].kind == LayerKind::fc) {
            max_fan = std::max(max_fan, geom.fan_in * b);
        }
    }
    cache.col.assign(max_col, 0.0);
    cache.gather.assign(max_fan, 0.0);
    cache.zeros.assign(max_buf, 0.0);
    cache.current.assign(max_buf, 0.0);

    for (std::size_t l = 0; l < layer_count; ++l) {
        const std::size_t buf = b * shape_.layers[l].activation_size();
        cache.act[l].assign(t_steps, std::vector<double>());
        cache.pot[l].assign(t_steps, std::vector<double>());
        const bool is_output = (l == layer_count - 1);
        for (int t = 0; t < t_steps; ++t) {
            if (!is_output) cache.act[l][t].assign(buf, 0.0);
            if (spec_.layers[l].weighted()) cache.pot[l][t].assign(buf, 0.0);
        }
    }

    std::size_t wl = 0;  // weighted-layer ordinal
    std::vector<std::size_t> widx(layer_count, SIZE_MAX);
    for (std::size_t l = 0; l < layer_count; ++l) {
        if (spec_.layers[l].weighted()) widx[l] = wl++;
    }

    for (int t = 0; t < t_steps; ++t) {
        for (std::size_t l = 0; l < layer_count; ++l) {
            const LayerSpec& layer = spec_.layers[l];
            const LayerGeom& geom = shape_.layers[l];
            const LayerGeom& pgeom = (l == 0) ? shape_.input : shape_.layers[l - 1];
            const std::size_t prev_size = pgeom.activation_size();
            const double* prev =
                (l == 0) ? cache.input.data() : cache.act[l - 1][t].data();
            // Stride between consecutive samples in the previous buffer; the
            // encoded input interleaves T slices per sample.
            const std::size_t prev_stride =
                (l == 0) ? t_steps * in_features : prev_size;
            const double* prev_base =
                (l == 0) ? prev + static_cast<std::size_t>(t) * in_features : prev;
            const bool is_output = (l == layer_count - 1);

            switch (layer.kind) {
            case LayerKind::conv: {
                const ParamLayer& pl = cache.effective.layers[widx[l]];
                const std::size_t n_pos =
                    static_cast<std::size_t>(geom.height) * geom.width;
                double* cur = cache.current.data();
                for (std::size_t s = 0; s < b; ++s) {
                    im2col(prev_base + s * prev_stride, pgeom.channels,
                           pgeom.height, pgeom.width, layer.kernel_size,
                           layer.stride, layer.padding, geom.height, geom.width,
                           cache.col.data());
                    double* cur_s = cur + s * geom.units * n_pos;
                    for (std::size_t o = 0; o < geom.units; ++o) {
                        std::fill(cur_s + o * n_pos, cur_s + (o + 1) * n_pos,
                                  pl.b[o]);
                    }
                    kernels::gemm_nn(geom.units, n_pos, geom.fan_in, pl.w.data(),
                                     cache.col.data(), cur_s);
                }
                const std::size_t buf = b * geom.activation_size();
                const double* u_prev =
                    (t == 0) ? cache.zeros.data() : cache.pot[l][t - 1].data();
                const double* x_prev =
                    (t == 0) ? cache.zeros.data() : cache.act[l][t - 1].data();
                kernels::lif_step(u_prev, x_prev, cur, spec_.tau, spec_.v_th,
                                  cache.pot[l][t].data(), cache.act[l][t].data(),
                                  buf);
                break;
            }
            case LayerKind::avgpool:
            case LayerKind::maxpool: {
                for (std::size_t s = 0; s < b; ++s) {
                    check_binary(prev_base + s * prev_stride, prev_size,
                                 "pool layer");
                }
                const int win = layer.window;
                const int stride = layer.stride;
                const double recip = 1.0 / (static_cast<double>(win) * win);
                double* out = cache.act[l][t].data();
                for (std::size_t s = 0; s < b; ++s) {
                    const double* xs = prev_base + s * prev_stride;
                    double* os = out + s * geom.activation_size();
                    for (int c = 0; c < geom.channels; ++c) {
                        const double* xc =
                            xs + static_cast<std::size_t>(c) * pgeom.height *
                                     pgeom.width;
                        double* oc = os + static_cast<std::size_t>(c) *
                                              geom.height * geom.width;
                        for (int oy = 0; oy < geom.height; ++oy) {
                            for (int ox = 0; ox < geom.width; ++ox) {
                                if (layer.kind == LayerKind::avgpool) {
                                    double sum = 0.0;
                                    for (int kh = 0; kh < win; ++kh) {
                                        const double* row =
                                            xc + (oy * stride + kh) * pgeom.width +
                                            ox * stride;
                                        for (int kw = 0; kw < win; ++kw) {
                                            sum += row[kw];
                                        }
                                    }
                                    oc[oy * geom.width + ox] = sum * recip;
                                } else {
                                    double best =
                                        xc[(oy * stride) * pgeom.width +
                                           ox * stride];
                                    for (int kh = 0; kh < win; ++kh) {
                                        const double* row =
                                            xc + (oy * stride + kh) * pgeom.width +
                                            ox * stride;
                                        for (int kw = 0; kw < win; ++kw) {
                                            if (row[kw] > best) best = row[kw];
                                        }
                                    }
                                    oc[oy * geom.width + ox] = best;
                                }
                            }
                        }
                    }
                }
                break;
            }
            case LayerKind::fc: {
                const ParamLayer& pl = cache.effective.layers[widx[l]];
                // Gather previous activations column-major (fan_in, batch).
                const double* x_in = nullptr;
                if (l > 0 && spec_.layers[l - 1].kind == LayerKind::fc) {
                    x_in = prev_base;
                } else {
                    double* g = cache.gather.data();
                    for (std::size_t s = 0; s < b; ++s) {
                        const double* xs = prev_base + s * prev_stride;
                        for (std::size_t f = 0; f < geom.fan_in; ++f) {
                            g[f * b + s] = xs[f];
                        }
                    }
                    x_in = g;
                }
                double* cur = cache.current.data();
                for (std::size_t u = 0; u < geom.units; ++u) {
                    std::fill(cur + u * b, cur + (u + 1) * b, pl.b[u]);
                }
                kernels::gemm_nn(geom.units, b, geom.fan_in, pl.w.data(), x_in,
                                 cur);
                const std::size_t buf = b * geom.units;
                const double* u_prev =
                    (t == 0) ? cache.zeros.data() : cache.pot[l][t - 1].data();
                if (is_output) {
                    kernels::lif_accumulate(u_prev, cur, spec_.tau,
                                            cache.pot[l][t].data(), buf);
                } else {
                    const double* x_prev =
                        (t == 0) ? cache.zeros.data() : cache.act[l][t - 1].data();
                    kernels::lif_step(u_prev, x_prev, cur, spec_.tau, spec_.v_th,
                                      cache.pot[l][t].data(),
                                      cache.act[l][t].data(), buf);
                }
                break;
            }
            }
        }
    }

    // Logits: mean over T of the output layer's accumulated potentials.
    const std::size_t classes = static_cast<std::size_t>(class_count());
    cache.logits.assign(b * classes, 0.0);
    const std::size_t out_l = layer_count - 1;
    for (std::size_t s = 0; s < b; ++s) {
        for (std::size_t c = 0; c < classes; ++c) {
            double acc = 0.0;
            for (int t = 0; t < t_steps; ++t) {
                acc += cache.pot[out_l][t][c * b + s];
            }
            cache.logits[s * classes + c] = acc / static_cast<double>(t_steps);
        }
    }
}

void Network::backward_pass(const ForwardCache& cache, const StructureMask& mask,
                            const double* dlogits, Gradients& grads) const {
    const int t_steps = spec_.time_steps;
    const std::size_t layer_count = spec_.layers.size();
    const std::size_t b = static_cast<std::size_t>(cache.batch);
    require(b >= 1 && cache.act.size() == layer_count,
            "backward_pass cache does not match a forward_pass");
    const std::size_t in_features = shape_.input.activation_size();
    const std::size_t classes = static_cast<std::size_t>(class_count());
    (void)mask;  // masking is already folded into cache.effective

    // Zeroed gradient buffers shaped like the parameters.
    grads.layers.resize(cache.effective.layers.size());
    for (std::size_t wl = 0; wl < grads.layers.size(); ++wl) {
        const ParamLayer& pl = cache.effective.layers[wl];
        grads.layers[wl].rows = pl.rows;
        grads.layers[wl].cols = pl.cols;
        grads.layers[wl].w.assign(pl.w.size(), 0.0);
        grads.layers[wl].b.assign(pl.b.size(), 0.0);
    }

    std::vector<std::size_t> widx(layer_count, SIZE_MAX);
    {
        std::size_t wl = 0;
        for (std::size_t l = 0; l < layer_count; ++l) {
            if (spec_.layers[l].weighted()) widx[l] = wl++;
        }
    }

    // dU at t+1 per weighted layer; dX scratch per layer at the current t.
    std::vector<std::vector<double>> du_next(layer_count);
    std::vector<std::vector<double>> dx(layer_count);
    std::vector<double> sg, du, dcol, gathered;
    for (std::size_t l = 0; l < layer_count; ++l) {
        const std::size_t buf = b * shape_.layers[l].activation_size();
        dx[l].assign(buf, 0.0);
        if (spec_.layers[l].weighted()) du_next[l].assign(buf, 0.0);
    }

    const std::size_t out_l = layer_count - 1;
    for (int t = t_steps - 1; t >= 0; --t) {
        for (std::size_t l = 0; l < layer_count; ++l) {
            std::fill(dx[l].begin(), dx[l].end(), 0.0);
        }
        for (std::size_t li = layer_count; li-- > 0;) {
            const LayerSpec& layer = spec_.layers[li];
            const LayerGeom& geom = shape_.layers[li];
            const LayerGeom& pgeom =
                (li == 0) ? shape_.input : shape_.layers[li - 1];
            const std::size_t prev_size = pgeom.activation_size();
            const std::size_t prev_stride =
                (li == 0) ? static_cast<std::size_t>(t_steps) * in_features
                          : prev_size;
            const double* prev_base =
                (li == 0) ? cache.input.data() +
                                static_cast<std::size_t>(t) * in_features
                          : cache.act[li - 1][t].data();
            const bool is_output = (li == out_l);
            const std::size_t buf = b * geom.activation_size();

            if (layer.kind == LayerKind::avgpool ||
                layer.kind == LayerKind::maxpool) {
                // Route pooled gradients back onto the previous layer.
                const int win = layer.window;
                const int stride = layer.stride;
                const double recip = 1.0 / (static_cast<double>(win) * win);
                if (li == 0) continue;  // gradient w.r.t. raw input not needed
                double* dprev = dx[li - 1].data();
                const double* dout = dx[li].data();
                for (std::size_t s = 0; s < b; ++s) {
                    const double* xs = prev_base + s * prev_stride;
                    const double* ds = dout + s * geom.activation_size();
                    double* dps = dprev + s * prev_size;
                    for (int c = 0; c < geom.channels; ++c) {
                        const double* xc =
                            xs + static_cast<std::size_t>(c) * pgeom.height *
                                     pgeom.width;
                        const double* dc = ds + static_cast<std::size_t>(c) *
                                                    geom.height * geom.width;
                        double* dpc = dps + static_cast<std::size_t>(c) *
                                                pgeom.height * pgeom.width;
                        for (int oy = 0; oy < geom.height; ++oy) {
                            for (int ox = 0; ox < geom.width; ++ox) {
                                const double g = dc[oy * geom.width + ox];
                                if (g == 0.0) continue;
                                if (layer.kind == LayerKind::avgpool) {
                                    for (int kh = 0; kh < win; ++kh) {
                                        double* row =
                                            dpc + (oy * stride + kh) * pgeom.width +
                                            ox * stride;
                                        for (int kw = 0; kw < win; ++kw) {
                                            row[kw] += g * recip;
                                        }
                                    }
                                } else {
                                    // First maximum in scan order wins.
                                    int best_kh = 0, best_kw = 0;
                                    double best =
                                        xc[(oy * stride) * pgeom.width +
                                           ox * stride];
                                    for (int kh = 0; kh < win; ++kh) {
                                        const double* row =
                                            xc + (oy * stride + kh) * pgeom.width +
                                            ox * stride;
                                        for (int kw = 0; kw < win; ++kw) {
                                            if (row[kw] > best) {
                                                best = row[kw];
                                                best_kh = kh;
                                                best_kw = kw;
                                            }
                                        }
                                    }
                                    dpc[(oy * stride + best_kh) * pgeom.width +
                                        ox * stride + best_kw] += g;
                                }
                            }
                        }
                    }
                }
                continue;
            }

            // Weighted layer: form dU for this step.
            const ParamLayer& pl = cache.effective.layers[widx[li]];
            ParamLayer& gl = grads.layers[widx[li]];
            const std::vector<double>& u_t = cache.pot[li][t];
            std::vector<double>& dun = du_next[li];
            du.assign(buf, 0.0);
            if (is_output) {
                // dU[t] = dlogits/T + tau * dU[t+1]; potentials accumulate
                // without reset, and logits average over T.
                for (std::size_t c = 0; c < classes; ++c) {
                    for (std::size_t s = 0; s < b; ++s) {
                        const double base =
                            dlogits[s * classes + c] /
                            static_cast<double>(t_steps);
                        du[c * b + s] = base + spec_.tau * dun[c * b + s];
                    }
                }
            } else {
                sg.assign(buf, 0.0);
                kernels::surrogate(u_t.data(), spec_.v_th, spec_.a, sg.data(),
                                   buf);
                const std::vector<double>& x_t = cache.act[li][t];
                const double* dxs = dx[li].data();
                for (std::size_t i = 0; i < buf; ++i) {
                    const double dx_total =
                        dxs[i] - spec_.tau * u_t[i] * dun[i];
                    du[i] = dx_total * sg[i] +
                            spec_.tau * (1.0 - x_t[i]) * dun[i];
                }
            }
            dun = du;

            // Parameter gradients and propagation to the previous layer.
            if (layer.kind == LayerKind::conv) {
                const std::size_t n_pos =
                    static_cast<std::size_t>(geom.height) * geom.width;
                std::vector<double>& col = gathered;
                col.assign(geom.fan_in * n_pos, 0.0);
                for (std::size_t s = 0; s < b; ++s) {
                    const double* du_s = du.data() + s * geom.units * n_pos;
                    im2col(prev_base + s * prev_stride, pgeom.channels,
                           pgeom.height, pgeom.width, layer.kernel_size,
                           layer.stride, layer.padding, geom.height, geom.width,
                           col.data());
                    // dW[o][r] += sum_p du[o][p] * col[r][p]
                    kernels::gemm_nt(geom.units, geom.fan_in, n_pos, du_s,
                                     col.data(), gl.w.data());
                    for (std::size_t o = 0; o < geom.units; ++o) {
                        double acc = 0.0;
                        const double* row = du_s + o * n_pos;
                        for (std::size_t p = 0; p < n_pos; ++p) acc += row[p];
                        gl.b[o] += acc;
                    }
                    if (li > 0) {
                        dcol.assign(geom.fan_in * n_pos, 0.0);
                        kernels::gemm_tn(geom.fan_in, n_pos, geom.units,
                                         pl.w.data(), du_s, dcol.data());
                        col2im_add(dcol.data(), pgeom.channels, pgeom.height,
                                   pgeom.width, layer.kernel_size, layer.stride,
                                   layer.padding, geom.height, geom.width,
                                   dx[li - 1].data() + s * prev_size);
                    }
                }
            } else {
                // fc: regather the column-major input exactly as forward did.
                const double* x_in = nullptr;
                if (li > 0 && spec_.layers[li - 1].kind == LayerKind::fc) {
                    x_in = prev_base;
                } else {
                    gathered.assign(geom.fan_in * b, 0.0);
                    for (std::size_t s = 0; s < b; ++s) {
                        const double* xs = prev_base + s * prev_stride;
                        for (std::size_t f = 0; f < geom.fan_in; ++f) {
                            gathered[f * b + s] = xs[f];
                        }
                    }
                    x_in = gathered.data();
                }
                // dW[u][f] += sum_s du[u][s] * x_in[f][s]
                kernels::gemm_nt(geom.units, geom.fan_in, b, du.data(), x_in,
                                 gl.w.data());
                for (std::size_t u = 0; u < geom.units; ++u) {
                    double acc = 0.0;
                    for (std::size_t s = 0; s < b; ++s) acc += du[u * b + s];
                    gl.b[u] += acc;
                }
                if (li > 0) {
                    if (spec_.layers[li - 1].kind == LayerKind::fc) {
                        kernels::gemm_tn(geom.fan_in, b, geom.units, pl.w.data(),
                                         du.data(), dx[li - 1].data());
                    } else {
                        dcol.assign(geom.fan_in * b, 0.0);
                        kernels::gemm_tn(geom.fan_in, b, geom.units, pl.w.data(),
                                         du.data(), dcol.data());
                        double* dprev = dx[li - 1].data();
                        for (std::size_t s = 0; s < b; ++s) {
                            double* dps = dprev + s * prev_size;
                            for (std::size_t f = 0; f < geom.fan_in; ++f) {
                                dps[f] += dcol[f * b + s];
                            }
                        }
                    }
                }
            }
        }
    }
}

void lif_step(const NetworkSpec& spec, const std::vector<double>& u_prev,
              const std::vector<double>& x_prev,
              const std::vector<double>& current, std::vector<double>& u,
              std::vector<double>& x) {
    const std::size_t n = u_prev.size();
    require(x_prev.size() == n && current.size() == n,
            "lif_step input sizes disagree");
    for (double v : x_prev) {
        require(v == 0.0 || v == 1.0, "lif_step x_prev must be binary");
    }
    u.assign(n, 0.0);
    x.assign(n, 0.0);
    kernels::lif_step(u_prev.data(), x_prev.data(), current.data(), spec.tau,
                      spec.v_th, u.data(), x.data(), n);
}

void spike_surrogate_grad(const NetworkSpec& spec, const std::vector<double>& u,
                          std::vector<double>& g) {
    g.assign(u.size(), 0.0);
    kernels::surrogate(u.data(), spec.v_th, spec.a, g.data(), u.size());
}

double softmax_cross_entropy(const std::vector<double>& logits,
                             const std::vector<int>& labels, int batch,
                             int classes, std::vector<double>& dlogits) {
    require(batch >= 1 && classes >= 1, "empty softmax batch");
    require(logits.size() == static_cast<std::size_t>(batch) * classes &&
                labels.size() == static_cast<std::size_t>(batch),
            "softmax shapes disagree");
    dlogits.assign(logits.size(), 0.0);
    double loss = 0.0;
    for (int s = 0; s < batch; ++s) {
        const double* row = logits.data() + static_cast<std::size_t>(s) * classes;
        double* drow = dlogits.data() + static_cast<std::size_t>(s) * classes;
        require(labels[s] >= 0 && labels[s] < classes, "label out of range");
        double mx = row[0];
        for (int c = 1; c < classes; ++c) mx = std::max(mx, row[c]);
        double denom = 0.0;
        for (int c = 0; c < classes; ++c) denom += std::exp(row[c] - mx);
        const double log_denom = std::log(denom);
        loss += -(row[labels[s]] - mx - log_denom);
        for (int c = 0; c < classes; ++c) {
            const double p = std::exp(row[c] - mx) / denom;
            drow[c] = (p - (c == labels[s] ? 1.0 : 0.0)) /
                      static_cast<double>(batch);
        }
    }
    return loss / static_cast<double>(batch);
}

void optimizer_step(Parameters& params, const Gradients& grads,
                    const StructureMask& mask, AdamState& state,
                    const AdamConfig& cfg) {
    require(params.layers.size() == grads.layers.size() &&
                params.layers.size() == mask.layers.size() &&
                params.layers.size() == state.layers.size(),
            "optimizer state shapes disagree");
    for (std::size_t l = 0; l < grads.layers.size(); ++l) {
        for (double g : grads.layers[l].w) {
            if (!std::isfinite(g)) {
                throw TrainingAbort("non-finite weight gradient in layer " +
                                    std::to_string(l));
            }
        }
        for (double g : grads.layers[l].b) {
            if (!std::isfinite(g)) {
                throw TrainingAbort("non-finite bias gradient in layer " +
                                    std::to_string(l));
            }
        }
    }
    state.step += 1;
    const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        ParamLayer& pl = params.layers[l];
        AdamLayer& al = state.layers[l];
        kernels::adam_step(pl.w.data(), grads.layers[l].w.data(), al.m_w.data(),
                           al.v_w.data(), mask.layers[l].syn_alive.data(),
                           pl.w.size(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps,
                           corr1, corr2);
        kernels::adam_step(pl.b.data(), grads.layers[l].b.data(), al.m_b.data(),
                           al.v_b.data(), mask.layers[l].unit_alive.data(),
                           pl.b.size(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps,
                           corr1, corr2);
    }
}

} // namespace sdsnn
