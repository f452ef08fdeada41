#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdsnn {

// In-memory dataset. Static image data has time_steps == 0 and per-sample
// payload channels*height*width; pre-converted frame data has
// time_steps == T and payload T*channels*height*width. Pixel values are
// normalized to [0,1].
struct Dataset {
    int class_count = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    int time_steps = 0;
    std::vector<float> pixels;  // size() * sample_size()
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::size_t frame_size() const {
        return static_cast<std::size_t>(channels) * height * width;
    }
    std::size_t sample_size() const {
        return frame_size() * (time_steps > 0 ? time_steps : 1);
    }
    void validate() const;
};

// Big-endian IDX (MNIST distribution format): images magic 0x00000803 with
// dims (count, rows, cols), labels magic 0x00000801 with dims (count).
// Pixels are scaled by 1/255. Throws ParseError with a descriptive message
// on bad magic, truncation, or image/label count mismatch.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Writes a single-channel static dataset back to the IDX pair; pixel bytes
// are round(p*255), so loading an IDX file and rewriting it is lossless.
void write_idx(const Dataset& data, const std::string& images_path,
               const std::string& labels_path);

// Dense frame-tensor container for pre-converted neuromorphic data.
// Layout (all integers little-endian u32): magic "SDFT", version 1, count,
// T, channels, height, width, class_count, then count labels (u8), then
// count*T*channels*height*width float32 (little-endian, row-major).
Dataset load_frames(const std::string& path);
void write_frames(const Dataset& data, const std::string& path);

// Seeded 4-quadrant-style blob corpus: each class lights a class-specific
// region (with +-1 pixel jitter) over a uniform noise floor; linearly
// separable by construction. Labels cycle 0..class_count-1.
Dataset synthetic_corpus(std::uint64_t seed, int n_samples, int channels,
                         int height, int width, int class_count, double noise);

// Time-expands sample `index` into out[T * frame_size]: static samples are
// replicated at every step (direct encoding); frame samples require
// time_steps == t and pass through unchanged.
void encode_input(const Dataset& data, std::size_t index, int t, double* out);

} // namespace sdsnn
