// Durable trace checkpoints. A checkpoint directory holds `checkpoint.json`
// (exact doubles, run identity, trace CSV length) and, in incremental mode,
// a binary factor file it names. Files are replaced atomically by rename, so
// an interrupted write leaves the previous checkpoint intact.

#ifndef LSA_CHECKPOINT_H_
#define LSA_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lsa/tracer.h"

namespace lsa {

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct Checkpoint {
    // Canonical JSON of everything that must match for a resume to be valid.
    std::string run_identity;
    // Bytes of the trace CSV that the state accounts for.
    std::uint64_t trace_bytes = 0;
    TraceState state;
};

std::string run_identity(const TraceConfig &config, const std::vector<TracedPair> &pairs,
                         std::uint64_t corpus_fingerprint);

void save_checkpoint(const std::filesystem::path &dir, const Checkpoint &checkpoint);

// Empty if the directory holds no checkpoint; InputError if it is corrupt.
std::optional<Checkpoint> load_checkpoint(const std::filesystem::path &dir);

// Binary layout, little-endian: "LSAFACTR", u32 version, u64 rows, u64 cols,
// u64 rank, rank x f64 values, rows x rank f64 left (column-major),
// cols x rank f64 right (column-major).
void write_factors(std::ostream &out, const IncrementalSvd &factors);
IncrementalSvd read_factors(std::istream &in);

}  // namespace lsa

#endif  // LSA_CHECKPOINT_H_
