#pragma once

#include "sdsnn/config.hpp"
#include "sdsnn/constraint.hpp"
#include "sdsnn/model.hpp"
#include "sdsnn/pruning.hpp"
#include "sdsnn/regeneration.hpp"

#include <string>

namespace sdsnn {

// Complete resumable training state. Loading a checkpoint written after epoch
// k and continuing reproduces an uninterrupted run bitwise (the shuffle RNG
// and the metrics emitted so far are part of the state).
struct TrainingState {
    ExperimentConfig cfg;
    int completed_epochs = 0;
    Parameters params;
    Parameters w_prev;  // previous epoch's post-constraint weights
    AdamState adam;
    StructureMask mask;
    SynapseBounds bounds;
    PruneSchedule sched;
    RegenState regen;
    std::string rng_shuffle;  // serialized mt19937_64 state
    std::string metrics_csv;  // metrics file content up to completed_epochs
};

// Binary container: magic "SDCK", version u32, payload length u64, payload,
// CRC32 of the payload. Writing goes through a temp file + rename so a crash
// never leaves a half-written checkpoint at `path`.
void checkpoint_save(const TrainingState& state, const std::string& path);

// Throws ParseError on bad magic, version mismatch, truncation, or CRC
// mismatch — never returns partial state.
TrainingState checkpoint_load(const std::string& path);

// CRC-32 (polynomial 0xEDB88320), exposed for tests.
std::uint32_t crc32(const void* data, std::size_t size);

} // namespace sdsnn
