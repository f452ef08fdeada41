#include "sdsnn/config.hpp"

#include "sdsnn/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sdsnn {

Mode parse_mode(const std::string& name) {
    if (name == "baseline") return Mode::baseline;
    if (name == "constraint_only") return Mode::constraint_only;
    if (name == "no_regeneration") return Mode::no_regeneration;
    if (name == "full") return Mode::full;
    throw ParseError("unknown mode '" + name +
                     "' (expected baseline|constraint_only|no_regeneration|full)");
}

std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::baseline:
        return "baseline";
    case Mode::constraint_only:
        return "constraint_only";
    case Mode::no_regeneration:
        return "no_regeneration";
    case Mode::full:
        return "full";
    }
    return "unknown";
}

DataSource parse_data_source(const std::string& name) {
    if (name == "synthetic") return DataSource::synthetic;
    if (name == "idx") return DataSource::idx;
    if (name == "frames") return DataSource::frames;
    throw ParseError("unknown data.source '" + name +
                     "' (expected synthetic|idx|frames)");
}

std::string data_source_name(DataSource source) {
    switch (source) {
    case DataSource::synthetic:
        return "synthetic";
    case DataSource::idx:
        return "idx";
    case DataSource::frames:
        return "frames";
    }
    return "unknown";
}

int ExperimentConfig::resolved_start() const {
    if (start_epoch >= 0) return start_epoch;
    return static_cast<int>(std::lround(0.24 * epochs));
}

int ExperimentConfig::resolved_mid() const {
    if (mid_epoch >= 0) return mid_epoch;
    return static_cast<int>(std::lround(0.40 * epochs));
}

NetworkSpec ExperimentConfig::network_spec() const {
    NetworkSpec spec;
    spec.layers = parse_architecture(arch);
    spec.in_channels = in_channels;
    spec.in_height = in_height;
    spec.in_width = in_width;
    spec.time_steps = time_steps;
    spec.tau = tau;
    spec.v_th = v_th;
    spec.a = a;
    spec.validate();
    return spec;
}

void ExperimentConfig::validate() const {
    network_spec();
    require(epochs >= 1, "epochs must be >= 1");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(checkpoint_every >= 0, "checkpoint.every must be >= 0");
    require(lr > 0.0, "optimizer.lr must be > 0");
    require(adam_beta1 > 0.0 && adam_beta1 < 1.0, "optimizer.beta1 in (0,1)");
    require(adam_beta2 > 0.0 && adam_beta2 < 1.0, "optimizer.beta2 in (0,1)");
    require(adam_eps > 0.0, "optimizer.eps must be > 0");
    require(t_num >= 1, "constraint.t_num must be >= 1");
    require(epsilon > 0.0 && epsilon < 1.0, "constraint.epsilon in (0,1)");
    require(rho_cap >= 0.0 && rho_cap < 100.0, "prune.rho_cap in [0,100)");
    require(rho_conv >= 0.0 && rho_conv <= rho_cap,
            "prune.rho_conv must lie in [0, rho_cap]");
    require(rho_fc >= 0.0 && rho_fc <= rho_cap,
            "prune.rho_fc must lie in [0, rho_cap]");
    require(prune_alpha <= 1.0 && prune_beta <= 1.0,
            "prune.alpha and prune.beta must be <= 1");
    require(resolved_start() >= 1, "prune.start_epoch must be >= 1");
    require(resolved_start() < resolved_mid(),
            "prune.start_epoch must precede prune.mid_epoch");
    require(rho_g0 >= 0.0 && rho_g0 <= 99.0, "regen.rho_g0 in [0,99]");
    require(gamma > 1.0, "regen.gamma must be > 1");
    require(regen_t_num == -1 || regen_t_num >= 1,
            "regen.t_num must be >= 1 (or -1 to share constraint.t_num)");
    require(syn_classes >= 1 && syn_train >= syn_classes &&
                syn_test >= syn_classes,
            "synthetic corpus sizes must cover every class");
    require(syn_noise >= 0.0 && syn_noise < 1.0, "synthetic.noise in [0,1)");

    auto must_exist = [](const std::string& path, const char* key) {
        require(!path.empty(),
                std::string("config key ") + key + " is required");
        require(std::filesystem::exists(path),
                "file referenced by " + std::string(key) + " does not exist: '" +
                    path + "'");
    };
    if (source == DataSource::idx) {
        must_exist(train_images, "data.train_images");
        must_exist(train_labels, "data.train_labels");
        must_exist(test_images, "data.test_images");
        must_exist(test_labels, "data.test_labels");
    } else if (source == DataSource::frames) {
        must_exist(train_frames, "data.train_frames");
        must_exist(test_frames, "data.test_frames");
    }
}

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return text.substr(begin, end - begin);
}

int to_int(const std::string& value, const std::string& key) {
    int out = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError("config key '" + key + "' expects an integer, got '" +
                         value + "'");
    }
    return out;
}

std::uint64_t to_u64(const std::string& value, const std::string& key) {
    std::uint64_t out = 0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError("config key '" + key +
                         "' expects a non-negative integer, got '" + value + "'");
    }
    return out;
}

double to_double(const std::string& value, const std::string& key) {
    double out = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ParseError("config key '" + key + "' expects a number, got '" +
                         value + "'");
    }
    return out;
}

bool to_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("config key '" + key + "' expects true|false, got '" +
                     value + "'");
}

std::string fmt(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
    if (key == "arch") cfg.arch = value;
    else if (key == "input.channels") cfg.in_channels = to_int(value, key);
    else if (key == "input.height") cfg.in_height = to_int(value, key);
    else if (key == "input.width") cfg.in_width = to_int(value, key);
    else if (key == "time_steps") cfg.time_steps = to_int(value, key);
    else if (key == "tau") cfg.tau = to_double(value, key);
    else if (key == "v_th") cfg.v_th = to_double(value, key);
    else if (key == "a") cfg.a = to_double(value, key);
    else if (key == "epochs") cfg.epochs = to_int(value, key);
    else if (key == "batch_size") cfg.batch_size = to_int(value, key);
    else if (key == "seed") cfg.seed = to_u64(value, key);
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "out.dir") cfg.out_dir = value;
    else if (key == "checkpoint.every") cfg.checkpoint_every = to_int(value, key);
    else if (key == "optimizer.lr") cfg.lr = to_double(value, key);
    else if (key == "optimizer.beta1") cfg.adam_beta1 = to_double(value, key);
    else if (key == "optimizer.beta2") cfg.adam_beta2 = to_double(value, key);
    else if (key == "optimizer.eps") cfg.adam_eps = to_double(value, key);
    else if (key == "constraint.t_num") cfg.t_num = to_int(value, key);
    else if (key == "constraint.epsilon") cfg.epsilon = to_double(value, key);
    else if (key == "prune.rho_conv") cfg.rho_conv = to_double(value, key);
    else if (key == "prune.rho_fc") cfg.rho_fc = to_double(value, key);
    else if (key == "prune.alpha") cfg.prune_alpha = to_double(value, key);
    else if (key == "prune.beta") cfg.prune_beta = to_double(value, key);
    else if (key == "prune.start_epoch") cfg.start_epoch = to_int(value, key);
    else if (key == "prune.mid_epoch") cfg.mid_epoch = to_int(value, key);
    else if (key == "prune.rho_cap") cfg.rho_cap = to_double(value, key);
    else if (key == "prune.per_layer") cfg.per_layer = to_bool(value, key);
    else if (key == "regen.rho_g0") cfg.rho_g0 = to_double(value, key);
    else if (key == "regen.gamma") cfg.gamma = to_double(value, key);
    else if (key == "regen.t_num") cfg.regen_t_num = to_int(value, key);
    else if (key == "data.source") cfg.source = parse_data_source(value);
    else if (key == "data.train_images") cfg.train_images = value;
    else if (key == "data.train_labels") cfg.train_labels = value;
    else if (key == "data.test_images") cfg.test_images = value;
    else if (key == "data.test_labels") cfg.test_labels = value;
    else if (key == "data.train_frames") cfg.train_frames = value;
    else if (key == "data.test_frames") cfg.test_frames = value;
    else if (key == "synthetic.classes") cfg.syn_classes = to_int(value, key);
    else if (key == "synthetic.train_samples") cfg.syn_train = to_int(value, key);
    else if (key == "synthetic.test_samples") cfg.syn_test = to_int(value, key);
    else if (key == "synthetic.channels") cfg.syn_channels = to_int(value, key);
    else if (key == "synthetic.height") cfg.syn_height = to_int(value, key);
    else if (key == "synthetic.width") cfg.syn_width = to_int(value, key);
    else if (key == "synthetic.noise") cfg.syn_noise = to_double(value, key);
    else if (key == "synthetic.seed") cfg.syn_seed = to_u64(value, key);
    else throw ParseError("unknown config key '" + key + "'");
}

} // namespace

void set_config_key(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    apply_key(cfg, key, value);
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) +
                             " is not key=value: '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config line " + std::to_string(line_no) +
                             " has an empty key");
        }
        apply_key(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "arch = " << cfg.arch << '\n';
    out << "input.channels = " << cfg.in_channels << '\n';
    out << "input.height = " << cfg.in_height << '\n';
    out << "input.width = " << cfg.in_width << '\n';
    out << "time_steps = " << cfg.time_steps << '\n';
    out << "tau = " << fmt(cfg.tau) << '\n';
    out << "v_th = " << fmt(cfg.v_th) << '\n';
    out << "a = " << fmt(cfg.a) << '\n';
    out << "epochs = " << cfg.epochs << '\n';
    out << "batch_size = " << cfg.batch_size << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "mode = " << mode_name(cfg.mode) << '\n';
    out << "out.dir = " << cfg.out_dir << '\n';
    out << "checkpoint.every = " << cfg.checkpoint_every << '\n';
    out << "optimizer.lr = " << fmt(cfg.lr) << '\n';
    out << "optimizer.beta1 = " << fmt(cfg.adam_beta1) << '\n';
    out << "optimizer.beta2 = " << fmt(cfg.adam_beta2) << '\n';
    out << "optimizer.eps = " << fmt(cfg.adam_eps) << '\n';
    out << "constraint.t_num = " << cfg.t_num << '\n';
    out << "constraint.epsilon = " << fmt(cfg.epsilon) << '\n';
    out << "prune.rho_conv = " << fmt(cfg.rho_conv) << '\n';
    out << "prune.rho_fc = " << fmt(cfg.rho_fc) << '\n';
    out << "prune.alpha = " << fmt(cfg.prune_alpha) << '\n';
    out << "prune.beta = " << fmt(cfg.prune_beta) << '\n';
    out << "prune.start_epoch = " << cfg.start_epoch << '\n';
    out << "prune.mid_epoch = " << cfg.mid_epoch << '\n';
    out << "prune.rho_cap = " << fmt(cfg.rho_cap) << '\n';
    out << "prune.per_layer = " << (cfg.per_layer ? "true" : "false") << '\n';
    out << "regen.rho_g0 = " << fmt(cfg.rho_g0) << '\n';
    out << "regen.gamma = " << fmt(cfg.gamma) << '\n';
    out << "regen.t_num = " << cfg.regen_t_num << '\n';
    out << "data.source = " << data_source_name(cfg.source) << '\n';
    if (!cfg.train_images.empty())
        out << "data.train_images = " << cfg.train_images << '\n';
    if (!cfg.train_labels.empty())
        out << "data.train_labels = " << cfg.train_labels << '\n';
    if (!cfg.test_images.empty())
        out << "data.test_images = " << cfg.test_images << '\n';
    if (!cfg.test_labels.empty())
        out << "data.test_labels = " << cfg.test_labels << '\n';
    if (!cfg.train_frames.empty())
        out << "data.train_frames = " << cfg.train_frames << '\n';
    if (!cfg.test_frames.empty())
        out << "data.test_frames = " << cfg.test_frames << '\n';
    out << "synthetic.classes = " << cfg.syn_classes << '\n';
    out << "synthetic.train_samples = " << cfg.syn_train << '\n';
    out << "synthetic.test_samples = " << cfg.syn_test << '\n';
    out << "synthetic.channels = " << cfg.syn_channels << '\n';
    out << "synthetic.height = " << cfg.syn_height << '\n';
    out << "synthetic.width = " << cfg.syn_width << '\n';
    out << "synthetic.noise = " << fmt(cfg.syn_noise) << '\n';
    out << "synthetic.seed = " << cfg.syn_seed << '\n';
    return out.str();
}

} // namespace sdsnn
