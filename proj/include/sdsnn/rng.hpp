#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace sdsnn {

// Deterministic RNG wrapper. All randomness in the library flows through this
// class so that runs are reproducible and the generator state can be
// checkpointed exactly (std::mt19937_64 text serialization is portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0,1) with 53 random mantissa bits; avoids
    // std::uniform_real_distribution, whose output is not pinned across
    // standard library implementations.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [0, n) by rejection-free scaling (n is tiny relative
    // to 2^64 everywhere this is used; modulo bias is < 2^-40).
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    std::string serialize() const;
    void deserialize(const std::string& text);

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace sdsnn
