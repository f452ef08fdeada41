#include <doctest.h>

#include "oracles.hpp"
#include "sdsnn/data.hpp"
#include "sdsnn/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace sdsnn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path root;
    TempDir() {
        root = fs::temp_directory_path() / "sdsnn_data_io_tests";
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~TempDir() { fs::remove_all(root); }
    std::string path(const std::string& name) const {
        return (root / name).string();
    }
};

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(static_cast<bool>(in));
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void push_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

// A 4-image 2x2 MNIST-format fixture built byte by byte from the format
// definition: big-endian magics 0x00000803 / 0x00000801.
std::vector<std::uint8_t> idx_image_fixture() {
    std::vector<std::uint8_t> bytes;
    push_u32_be(bytes, 0x00000803u);
    push_u32_be(bytes, 4);  // count
    push_u32_be(bytes, 2);  // rows
    push_u32_be(bytes, 2);  // cols
    for (std::uint8_t p = 0; p < 16; ++p) {
        bytes.push_back(static_cast<std::uint8_t>(p * 17));  // 0,17,...,255
    }
    return bytes;
}

std::vector<std::uint8_t> idx_label_fixture() {
    std::vector<std::uint8_t> bytes;
    push_u32_be(bytes, 0x00000801u);
    push_u32_be(bytes, 4);
    bytes.insert(bytes.end(), {0, 1, 2, 1});
    return bytes;
}

} // namespace

TEST_CASE("load_idx parses a hand-built MNIST-format pair") {
    TempDir tmp;
    write_bytes(tmp.path("img"), idx_image_fixture());
    write_bytes(tmp.path("lbl"), idx_label_fixture());

    const Dataset data = load_idx(tmp.path("img"), tmp.path("lbl"));
    CHECK(data.size() == 4);
    CHECK(data.channels == 1);
    CHECK(data.height == 2);
    CHECK(data.width == 2);
    CHECK(data.time_steps == 0);
    CHECK(data.class_count == 3);  // max label + 1
    CHECK(data.labels == std::vector<int>{0, 1, 2, 1});
    REQUIRE(data.pixels.size() == 16);
    for (int i = 0; i < 16; ++i) {
        CHECK(data.pixels[static_cast<std::size_t>(i)] ==
              static_cast<float>(i * 17) / 255.0f);
    }
    CHECK(data.pixels[15] == 1.0f);
    CHECK_NOTHROW(data.validate());
}

TEST_CASE("load_idx rejects malformed input") {
    TempDir tmp;

    SUBCASE("wrong image magic") {
        auto img = idx_image_fixture();
        img[3] = 0x02;
        write_bytes(tmp.path("img"), img);
        write_bytes(tmp.path("lbl"), idx_label_fixture());
        try {
            load_idx(tmp.path("img"), tmp.path("lbl"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("unexpected magic") !=
                  std::string::npos);
        }
    }
    SUBCASE("wrong label magic") {
        auto lbl = idx_label_fixture();
        lbl[3] = 0x03;
        write_bytes(tmp.path("img"), idx_image_fixture());
        write_bytes(tmp.path("lbl"), lbl);
        CHECK_THROWS_AS(load_idx(tmp.path("img"), tmp.path("lbl")), ParseError);
    }
    SUBCASE("truncated header") {
        auto img = idx_image_fixture();
        img.resize(6);
        write_bytes(tmp.path("img"), img);
        write_bytes(tmp.path("lbl"), idx_label_fixture());
        CHECK_THROWS_AS(load_idx(tmp.path("img"), tmp.path("lbl")), ParseError);
    }
    SUBCASE("truncated pixel payload") {
        auto img = idx_image_fixture();
        img.resize(img.size() - 3);
        write_bytes(tmp.path("img"), img);
        write_bytes(tmp.path("lbl"), idx_label_fixture());
        try {
            load_idx(tmp.path("img"), tmp.path("lbl"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("truncated") != std::string::npos);
        }
    }
    SUBCASE("image/label count mismatch") {
        auto lbl = idx_label_fixture();
        lbl[7] = 3;  // count 3 vs 4 images
        lbl.pop_back();
        write_bytes(tmp.path("img"), idx_image_fixture());
        write_bytes(tmp.path("lbl"), lbl);
        CHECK_THROWS_AS(load_idx(tmp.path("img"), tmp.path("lbl")), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_idx(tmp.path("absent"), tmp.path("lbl")),
                        ParseError);
    }
}

TEST_CASE("write_idx round-trips byte for byte") {
    TempDir tmp;
    write_bytes(tmp.path("img"), idx_image_fixture());
    write_bytes(tmp.path("lbl"), idx_label_fixture());
    const Dataset data = load_idx(tmp.path("img"), tmp.path("lbl"));

    write_idx(data, tmp.path("img2"), tmp.path("lbl2"));
    CHECK(read_bytes(tmp.path("img2")) == idx_image_fixture());
    CHECK(read_bytes(tmp.path("lbl2")) == idx_label_fixture());
}

TEST_CASE("IDX quantization is idempotent after the first write") {
    TempDir tmp;
    const Dataset synth = synthetic_corpus(3, 12, 1, 6, 6, 3, 0.3);
    write_idx(synth, tmp.path("a_img"), tmp.path("a_lbl"));
    const Dataset loaded = load_idx(tmp.path("a_img"), tmp.path("a_lbl"));
    write_idx(loaded, tmp.path("b_img"), tmp.path("b_lbl"));
    CHECK(read_bytes(tmp.path("a_img")) == read_bytes(tmp.path("b_img")));
    CHECK(read_bytes(tmp.path("a_lbl")) == read_bytes(tmp.path("b_lbl")));
}

TEST_CASE("frame container round-trips exactly") {
    TempDir tmp;
    Dataset frames;
    frames.class_count = 2;
    frames.channels = 1;
    frames.height = 2;
    frames.width = 2;
    frames.time_steps = 2;
    frames.labels = {1, 0};
    frames.pixels = {0.0f,   0.125f, 0.25f,  0.375f, 0.5f,   0.625f,
                     0.75f,  0.875f, 1.0f,   0.1f,   0.2f,   0.3f,
                     0.4f,   0.5f,   0.6f,   0.7f};
    REQUIRE(frames.pixels.size() == frames.size() * frames.sample_size());

    write_frames(frames, tmp.path("frames"));
    const Dataset back = load_frames(tmp.path("frames"));
    CHECK(back.class_count == frames.class_count);
    CHECK(back.channels == frames.channels);
    CHECK(back.height == frames.height);
    CHECK(back.width == frames.width);
    CHECK(back.time_steps == frames.time_steps);
    CHECK(back.labels == frames.labels);
    CHECK(back.pixels == frames.pixels);  // float32 storage is lossless
}

TEST_CASE("load_frames rejects malformed containers") {
    TempDir tmp;
    Dataset frames;
    frames.class_count = 2;
    frames.channels = 1;
    frames.height = 2;
    frames.width = 2;
    frames.time_steps = 1;
    frames.labels = {0, 1};
    frames.pixels.assign(8, 0.5f);
    write_frames(frames, tmp.path("good"));
    const auto good = read_bytes(tmp.path("good"));

    SUBCASE("bad magic") {
        auto bytes = good;
        bytes[0] = 'X';
        write_bytes(tmp.path("bad"), bytes);
        CHECK_THROWS_AS(load_frames(tmp.path("bad")), ParseError);
    }
    SUBCASE("unsupported version") {
        auto bytes = good;
        bytes[4] = 2;
        write_bytes(tmp.path("bad"), bytes);
        try {
            load_frames(tmp.path("bad"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("version") != std::string::npos);
        }
    }
    SUBCASE("truncated payload") {
        auto bytes = good;
        bytes.resize(bytes.size() - 5);
        write_bytes(tmp.path("bad"), bytes);
        CHECK_THROWS_AS(load_frames(tmp.path("bad")), ParseError);
    }
    SUBCASE("label out of class range") {
        auto bytes = good;
        // First label byte sits after the magic plus 7 u32 header fields.
        bytes[32] = 9;
        write_bytes(tmp.path("bad"), bytes);
        CHECK_THROWS_AS(load_frames(tmp.path("bad")), ContractError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_frames(tmp.path("absent")), ParseError);
    }
}

TEST_CASE("encode_input replicates static frames and passes frame data through") {
    SUBCASE("static replication") {
        Dataset data;
        data.class_count = 1;
        data.channels = 1;
        data.height = 1;
        data.width = 2;
        data.time_steps = 0;
        data.labels = {0};
        data.pixels = {0.25f, 0.5f};

        std::vector<double> out(6, -1.0);
        encode_input(data, 0, 3, out.data());
        CHECK(out == std::vector<double>{0.25, 0.5, 0.25, 0.5, 0.25, 0.5});
        CHECK_THROWS_AS(encode_input(data, 1, 3, out.data()), ContractError);
        CHECK_THROWS_AS(encode_input(data, 0, 0, out.data()), ContractError);
    }
    SUBCASE("frame passthrough") {
        Dataset data;
        data.class_count = 1;
        data.channels = 1;
        data.height = 1;
        data.width = 2;
        data.time_steps = 2;
        data.labels = {0, 0};
        data.pixels = {0.1f, 0.2f, 0.3f, 0.4f, 0.9f, 0.8f, 0.7f, 0.6f};

        std::vector<double> out(4, -1.0);
        encode_input(data, 1, 2, out.data());
        CHECK(out[0] == static_cast<double>(0.9f));
        CHECK(out[3] == static_cast<double>(0.6f));
        CHECK_THROWS_AS(encode_input(data, 0, 3, out.data()), ContractError);
    }
}

TEST_CASE("synthetic corpus is deterministic, bounded, and label-cyclic") {
    const Dataset a = synthetic_corpus(99, 40, 1, 12, 12, 4, 0.2);
    const Dataset b = synthetic_corpus(99, 40, 1, 12, 12, 4, 0.2);
    const Dataset c = synthetic_corpus(100, 40, 1, 12, 12, 4, 0.2);

    CHECK(a.pixels == b.pixels);
    CHECK(a.labels == b.labels);
    CHECK(a.pixels != c.pixels);

    for (int s = 0; s < 40; ++s) {
        CHECK(a.labels[static_cast<std::size_t>(s)] == s % 4);
    }
    CHECK_NOTHROW(a.validate());

    CHECK_THROWS_AS(synthetic_corpus(1, 2, 1, 12, 12, 4, 0.2), ContractError);
    CHECK_THROWS_AS(synthetic_corpus(1, 40, 1, 3, 12, 4, 0.2), ContractError);
    CHECK_THROWS_AS(synthetic_corpus(1, 40, 1, 12, 12, 4, 1.0), ContractError);
}

TEST_CASE("synthetic corpus is separable by nearest centroid") {
    SUBCASE("two classes") {
        const Dataset train = synthetic_corpus(5, 200, 1, 10, 10, 2, 0.2);
        const Dataset test = synthetic_corpus(6, 100, 1, 10, 10, 2, 0.2);
        CHECK(oracle::nearest_centroid_accuracy(train, test) > 95.0);
    }
    SUBCASE("reference corpus used by the experiment configs") {
        const Dataset train = synthetic_corpus(99, 2000, 1, 12, 12, 4, 0.2);
        const Dataset test = synthetic_corpus(100, 500, 1, 12, 12, 4, 0.2);
        CHECK(oracle::nearest_centroid_accuracy(train, test) > 90.0);
    }
}
