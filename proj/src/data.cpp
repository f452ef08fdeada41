#include "sdsnn/data.hpp"

#include "sdsnn/errors.hpp"
#include "sdsnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace sdsnn {

void Dataset::validate() const {
    require(class_count >= 1, "dataset class_count must be >= 1");
    require(channels >= 1 && height >= 1 && width >= 1,
            "dataset shape must be positive");
    require(pixels.size() == size() * sample_size(),
            "dataset pixel buffer does not match sample count");
    for (int label : labels) {
        require(label >= 0 && label < class_count, "dataset label out of range");
    }
    for (float p : pixels) {
        require(p >= 0.0f && p <= 1.0f, "dataset pixel outside [0,1]");
    }
}

namespace {

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) {
        throw ParseError("truncated IDX header in '" + path + "'");
    }
    return (static_cast<std::uint32_t>(bytes[0]) << 24) |
           (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) |
           static_cast<std::uint32_t>(bytes[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t value) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(value >> 24),
        static_cast<unsigned char>(value >> 16),
        static_cast<unsigned char>(value >> 8),
        static_cast<unsigned char>(value),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32_le(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) {
        throw ParseError("truncated frame file '" + path + "'");
    }
    return static_cast<std::uint32_t>(bytes[0]) |
           (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t value) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(value),
        static_cast<unsigned char>(value >> 8),
        static_cast<unsigned char>(value >> 16),
        static_cast<unsigned char>(value >> 24),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

} // namespace

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) {
        throw ParseError("cannot open IDX image file '" + images_path + "'");
    }
    const std::uint32_t image_magic = read_u32_be(images, images_path);
    if (image_magic != 0x00000803u) {
        throw ParseError("unexpected magic in '" + images_path +
                         "': expected IDX image magic 0x00000803");
    }
    const std::uint32_t count = read_u32_be(images, images_path);
    const std::uint32_t rows = read_u32_be(images, images_path);
    const std::uint32_t cols = read_u32_be(images, images_path);
    require(rows >= 1 && cols >= 1, "IDX image dimensions must be positive");

    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) {
        throw ParseError("cannot open IDX label file '" + labels_path + "'");
    }
    const std::uint32_t label_magic = read_u32_be(labels, labels_path);
    if (label_magic != 0x00000801u) {
        throw ParseError("unexpected magic in '" + labels_path +
                         "': expected IDX label magic 0x00000801");
    }
    const std::uint32_t label_count = read_u32_be(labels, labels_path);
    if (label_count != count) {
        throw ParseError("IDX image count " + std::to_string(count) +
                         " does not match label count " +
                         std::to_string(label_count));
    }

    Dataset data;
    data.channels = 1;
    data.height = static_cast<int>(rows);
    data.width = static_cast<int>(cols);
    data.time_steps = 0;

    const std::size_t pixel_count =
        static_cast<std::size_t>(count) * rows * cols;
    std::vector<unsigned char> raw(pixel_count);
    images.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(pixel_count));
    if (static_cast<std::size_t>(images.gcount()) != pixel_count) {
        throw ParseError("truncated IDX image payload in '" + images_path + "'");
    }
    data.pixels.resize(pixel_count);
    for (std::size_t i = 0; i < pixel_count; ++i) {
        data.pixels[i] = static_cast<float>(raw[i]) / 255.0f;
    }

    std::vector<unsigned char> raw_labels(count);
    labels.read(reinterpret_cast<char*>(raw_labels.data()),
                static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(labels.gcount()) != count) {
        throw ParseError("truncated IDX label payload in '" + labels_path + "'");
    }
    data.labels.resize(count);
    int max_label = 0;
    for (std::uint32_t i = 0; i < count; ++i) {
        data.labels[i] = static_cast<int>(raw_labels[i]);
        max_label = std::max(max_label, data.labels[i]);
    }
    data.class_count = max_label + 1;
    return data;
}

void write_idx(const Dataset& data, const std::string& images_path,
               const std::string& labels_path) {
    require(data.channels == 1 && data.time_steps == 0,
            "IDX export supports single-channel static datasets only");
    std::ofstream images(images_path, std::ios::binary);
    require(static_cast<bool>(images),
            "cannot open '" + images_path + "' for writing");
    write_u32_be(images, 0x00000803u);
    write_u32_be(images, static_cast<std::uint32_t>(data.size()));
    write_u32_be(images, static_cast<std::uint32_t>(data.height));
    write_u32_be(images, static_cast<std::uint32_t>(data.width));
    for (float p : data.pixels) {
        const unsigned char byte =
            static_cast<unsigned char>(std::lround(p * 255.0f));
        images.write(reinterpret_cast<const char*>(&byte), 1);
    }
    require(static_cast<bool>(images), "failed writing '" + images_path + "'");

    std::ofstream labels(labels_path, std::ios::binary);
    require(static_cast<bool>(labels),
            "cannot open '" + labels_path + "' for writing");
    write_u32_be(labels, 0x00000801u);
    write_u32_be(labels, static_cast<std::uint32_t>(data.size()));
    for (int label : data.labels) {
        const unsigned char byte = static_cast<unsigned char>(label);
        labels.write(reinterpret_cast<const char*>(&byte), 1);
    }
    require(static_cast<bool>(labels), "failed writing '" + labels_path + "'");
}

Dataset load_frames(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open frame file '" + path + "'");
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SDFT", 4) != 0) {
        throw ParseError("unexpected magic in '" + path +
                         "': expected frame container magic 'SDFT'");
    }
    const std::uint32_t version = read_u32_le(in, path);
    if (version != 1) {
        throw ParseError("unsupported frame container version " +
                         std::to_string(version) + " in '" + path + "'");
    }
    Dataset data;
    const std::uint32_t count = read_u32_le(in, path);
    data.time_steps = static_cast<int>(read_u32_le(in, path));
    data.channels = static_cast<int>(read_u32_le(in, path));
    data.height = static_cast<int>(read_u32_le(in, path));
    data.width = static_cast<int>(read_u32_le(in, path));
    data.class_count = static_cast<int>(read_u32_le(in, path));
    require(data.time_steps >= 1, "frame container must have T >= 1");

    data.labels.resize(count);
    std::vector<unsigned char> raw_labels(count);
    in.read(reinterpret_cast<char*>(raw_labels.data()),
            static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        throw ParseError("truncated frame labels in '" + path + "'");
    }
    for (std::uint32_t i = 0; i < count; ++i) {
        data.labels[i] = static_cast<int>(raw_labels[i]);
    }

    const std::size_t value_count =
        static_cast<std::size_t>(count) * data.sample_size();
    data.pixels.resize(value_count);
    in.read(reinterpret_cast<char*>(data.pixels.data()),
            static_cast<std::streamsize>(value_count * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != value_count * sizeof(float)) {
        throw ParseError("truncated frame payload in '" + path + "'");
    }
    data.validate();
    return data;
}

void write_frames(const Dataset& data, const std::string& path) {
    require(data.time_steps >= 1,
            "frame export requires time-major data (time_steps >= 1)");
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot open '" + path + "' for writing");
    out.write("SDFT", 4);
    write_u32_le(out, 1u);
    write_u32_le(out, static_cast<std::uint32_t>(data.size()));
    write_u32_le(out, static_cast<std::uint32_t>(data.time_steps));
    write_u32_le(out, static_cast<std::uint32_t>(data.channels));
    write_u32_le(out, static_cast<std::uint32_t>(data.height));
    write_u32_le(out, static_cast<std::uint32_t>(data.width));
    write_u32_le(out, static_cast<std::uint32_t>(data.class_count));
    for (int label : data.labels) {
        const unsigned char byte = static_cast<unsigned char>(label);
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
    out.write(reinterpret_cast<const char*>(data.pixels.data()),
              static_cast<std::streamsize>(data.pixels.size() * sizeof(float)));
    require(static_cast<bool>(out), "failed writing '" + path + "'");
}

Dataset synthetic_corpus(std::uint64_t seed, int n_samples, int channels,
                         int height, int width, int class_count, double noise) {
    require(class_count >= 1, "synthetic corpus needs class_count >= 1");
    require(n_samples >= class_count,
            "synthetic corpus needs n_samples >= class_count");
    require(channels >= 1 && height >= 4 && width >= 4,
            "synthetic corpus needs at least a 4x4 image");
    require(noise >= 0.0 && noise < 1.0, "noise must lie in [0, 1)");

    Dataset data;
    data.class_count = class_count;
    data.channels = channels;
    data.height = height;
    data.width = width;
    data.time_steps = 0;
    data.labels.resize(n_samples);
    data.pixels.assign(static_cast<std::size_t>(n_samples) * data.frame_size(),
                       0.0f);

    Rng rng(seed);
    const double sigma = std::max(height, width) / 8.0;
    for (int s = 0; s < n_samples; ++s) {
        const int label = s % class_count;
        data.labels[s] = label;
        // Class centers on a ring; jitter by +-1 pixel per axis.
        const double angle =
            2.0 * 3.14159265358979323846 * label / class_count;
        const double cy = height / 2.0 + 0.28 * height * std::sin(angle) +
                          (rng.uniform() * 2.0 - 1.0);
        const double cx = width / 2.0 + 0.28 * width * std::cos(angle) +
                          (rng.uniform() * 2.0 - 1.0);
        float* sample =
            data.pixels.data() + static_cast<std::size_t>(s) * data.frame_size();
        for (int c = 0; c < channels; ++c) {
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    const double dy = y - cy;
                    const double dx = x - cx;
                    const double bump =
                        0.9 * std::exp(-(dy * dy + dx * dx) /
                                       (2.0 * sigma * sigma));
                    const double n = noise * rng.uniform();
                    const double v = std::min(1.0, std::max(0.0, bump + n));
                    sample[(static_cast<std::size_t>(c) * height + y) * width +
                           x] = static_cast<float>(v);
                }
            }
        }
    }
    return data;
}

void encode_input(const Dataset& data, std::size_t index, int t, double* out) {
    require(t >= 1, "encode_input needs T >= 1");
    require(index < data.size(), "encode_input sample index out of range");
    const std::size_t frame = data.frame_size();
    const float* src =
        data.pixels.data() + index * data.sample_size();
    if (data.time_steps > 0) {
        require(data.time_steps == t,
                "frame dataset T does not match network time_steps");
        for (std::size_t i = 0; i < frame * static_cast<std::size_t>(t); ++i) {
            out[i] = static_cast<double>(src[i]);
        }
        return;
    }
    for (int step = 0; step < t; ++step) {
        double* dst = out + static_cast<std::size_t>(step) * frame;
        for (std::size_t i = 0; i < frame; ++i) {
            dst[i] = static_cast<double>(src[i]);
        }
    }
}

} // namespace sdsnn
