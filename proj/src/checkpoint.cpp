#include "sdsnn/checkpoint.hpp"

#include "sdsnn/errors.hpp"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace sdsnn {

std::uint32_t crc32(const void* data, std::size_t size) {
    static const std::array<std::uint32_t, 256> table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit) {
                c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        crc = table[(crc ^ bytes[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
        }
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        u64(bits);
    }
    void str(const std::string& s) {
        u64(s.size());
        buf_.append(s);
    }
    void vec_f64(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
    void vec_u32(const std::vector<std::uint32_t>& v) {
        u64(v.size());
        for (std::uint32_t x : v) u32(x);
    }
    void vec_u8(const std::vector<std::uint8_t>& v) {
        u64(v.size());
        for (std::uint8_t x : v) u8(x);
    }
    const std::string& buffer() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const std::string& buf, const std::string& path)
        : buf_(buf), path_(path) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(buf_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(
                     static_cast<unsigned char>(buf_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::vector<double> vec_f64() {
        const std::uint64_t n = u64();
        std::vector<double> v(n);
        for (auto& x : v) x = f64();
        return v;
    }
    std::vector<std::uint32_t> vec_u32() {
        const std::uint64_t n = u64();
        std::vector<std::uint32_t> v(n);
        for (auto& x : v) x = u32();
        return v;
    }
    std::vector<std::uint8_t> vec_u8() {
        const std::uint64_t n = u64();
        std::vector<std::uint8_t> v(n);
        for (auto& x : v) x = u8();
        return v;
    }
    bool exhausted() const { return pos_ == buf_.size(); }

private:
    void need(std::uint64_t n) {
        if (pos_ + n > buf_.size()) {
            throw ParseError("truncated checkpoint '" + path_ + "'");
        }
    }
    const std::string& buf_;
    std::string path_;
    std::size_t pos_ = 0;
};

void write_params(Writer& w, const Parameters& p) {
    w.u64(p.layers.size());
    for (const ParamLayer& layer : p.layers) {
        w.u64(layer.rows);
        w.u64(layer.cols);
        w.vec_f64(layer.w);
        w.vec_f64(layer.b);
    }
}

Parameters read_params(Reader& r) {
    Parameters p;
    p.layers.resize(r.u64());
    for (ParamLayer& layer : p.layers) {
        layer.rows = r.u64();
        layer.cols = r.u64();
        layer.w = r.vec_f64();
        layer.b = r.vec_f64();
        require(layer.w.size() == layer.rows * layer.cols &&
                    layer.b.size() == layer.rows,
                "checkpoint parameter shapes are inconsistent");
    }
    return p;
}

} // namespace

void checkpoint_save(const TrainingState& state, const std::string& path) {
    Writer w;
    w.str(serialize_config(state.cfg));
    w.i32(state.completed_epochs);
    write_params(w, state.params);
    write_params(w, state.w_prev);

    w.u64(state.adam.step);
    w.u64(state.adam.layers.size());
    for (const AdamLayer& layer : state.adam.layers) {
        w.vec_f64(layer.m_w);
        w.vec_f64(layer.v_w);
        w.vec_f64(layer.m_b);
        w.vec_f64(layer.v_b);
    }

    w.u64(state.mask.layers.size());
    for (const MaskLayer& layer : state.mask.layers) {
        w.vec_u8(layer.unit_alive);
        w.vec_u8(layer.syn_alive);
    }

    w.u64(state.bounds.layers.size());
    for (const BoundsLayer& layer : state.bounds.layers) {
        w.vec_f64(layer.r_pos);
        w.vec_f64(layer.r_neg);
        w.vec_u32(layer.n_pos);
        w.vec_u32(layer.n_neg);
        w.vec_u32(layer.n_decay);
        w.vec_f64(layer.c_pos);
        w.vec_f64(layer.c_neg);
    }

    w.f64(state.sched.rho_conv);
    w.f64(state.sched.rho_fc);
    w.f64(state.sched.alpha);
    w.f64(state.sched.beta);
    w.i32(state.sched.start_epoch);
    w.i32(state.sched.mid_epoch);
    w.f64(state.sched.rho_cap);
    w.u8(state.sched.per_layer ? 1 : 0);
    w.vec_f64(state.sched.rho_layers);

    w.f64(state.regen.rho_g);
    w.f64(state.regen.gamma);
    w.i32(state.regen.t_num);
    w.u64(state.regen.layers.size());
    for (const RegenLayer& layer : state.regen.layers) {
        w.vec_u32(layer.t_g);
    }

    w.str(state.rng_shuffle);
    w.str(state.metrics_csv);

    const std::string& payload = w.buffer();
    const std::uint32_t crc = crc32(payload.data(), payload.size());

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(out),
                "cannot open '" + tmp + "' for writing");
        out.write("SDCK", 4);
        Writer header;
        header.u32(kVersion);
        header.u64(payload.size());
        out.write(header.buffer().data(),
                  static_cast<std::streamsize>(header.buffer().size()));
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        Writer footer;
        footer.u32(crc);
        out.write(footer.buffer().data(),
                  static_cast<std::streamsize>(footer.buffer().size()));
        require(static_cast<bool>(out), "failed writing '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

TrainingState checkpoint_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open checkpoint '" + path + "'");
    }
    std::string blob((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (blob.size() < 4 + 4 + 8 + 4 || blob.compare(0, 4, "SDCK") != 0) {
        throw ParseError("'" + path + "' is not a checkpoint (bad magic)");
    }
    std::uint32_t version = 0;
    std::uint64_t payload_len = 0;
    {
        Reader h(blob, path);
        h.u32();  // magic, already validated
        version = h.u32();
        payload_len = h.u64();
    }
    if (version != kVersion) {
        throw ParseError("checkpoint version mismatch in '" + path +
                         "': found " + std::to_string(version) + ", expected " +
                         std::to_string(kVersion));
    }
    const std::size_t header_len = 4 + 4 + 8;
    if (blob.size() != header_len + payload_len + 4) {
        throw ParseError("truncated checkpoint '" + path + "'");
    }
    const std::string payload = blob.substr(header_len, payload_len);
    std::uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) {
        stored_crc |= static_cast<std::uint32_t>(static_cast<unsigned char>(
                          blob[header_len + payload_len + i]))
                      << (8 * i);
    }
    if (crc32(payload.data(), payload.size()) != stored_crc) {
        throw ParseError("checkpoint CRC mismatch in '" + path +
                         "' (corrupted file)");
    }

    Reader p(payload, path);
    TrainingState state;
    state.cfg = parse_config_text(p.str());
    state.completed_epochs = p.i32();
    state.params = read_params(p);
    state.w_prev = read_params(p);

    state.adam.step = p.u64();
    state.adam.layers.resize(p.u64());
    for (AdamLayer& layer : state.adam.layers) {
        layer.m_w = p.vec_f64();
        layer.v_w = p.vec_f64();
        layer.m_b = p.vec_f64();
        layer.v_b = p.vec_f64();
    }

    state.mask.layers.resize(p.u64());
    for (MaskLayer& layer : state.mask.layers) {
        layer.unit_alive = p.vec_u8();
        layer.syn_alive = p.vec_u8();
    }

    state.bounds.layers.resize(p.u64());
    for (BoundsLayer& layer : state.bounds.layers) {
        layer.r_pos = p.vec_f64();
        layer.r_neg = p.vec_f64();
        layer.n_pos = p.vec_u32();
        layer.n_neg = p.vec_u32();
        layer.n_decay = p.vec_u32();
        layer.c_pos = p.vec_f64();
        layer.c_neg = p.vec_f64();
    }

    state.sched.rho_conv = p.f64();
    state.sched.rho_fc = p.f64();
    state.sched.alpha = p.f64();
    state.sched.beta = p.f64();
    state.sched.start_epoch = p.i32();
    state.sched.mid_epoch = p.i32();
    state.sched.rho_cap = p.f64();
    state.sched.per_layer = p.u8() != 0;
    state.sched.rho_layers = p.vec_f64();

    state.regen.rho_g = p.f64();
    state.regen.gamma = p.f64();
    state.regen.t_num = p.i32();
    state.regen.layers.resize(p.u64());
    for (RegenLayer& layer : state.regen.layers) {
        layer.t_g = p.vec_u32();
    }

    state.rng_shuffle = p.str();
    state.metrics_csv = p.str();
    if (!p.exhausted()) {
        throw ParseError("checkpoint '" + path + "' has trailing bytes");
    }
    return state;
}

} // namespace sdsnn
