// Semantic-space persistence.
//
// Binary layout (all integers and floats little-endian):
//   magic      8 bytes   "LSASPACE"
//   version    u32       currently 1
//   k          u32
//   words      u64       vocabulary size
//   weighting  u8        0 = raw, 1 = log-entropy
//   flags      u8        bit 0: degenerate truncation boundary
//   fingerprint u64      corpus fingerprint
//   singular values      k x f64
//   word vectors         words x k x f64, vocabulary order
//   vocabulary           words x (u32 byte length, UTF-8 bytes)
//
// The binary form is canonical; JSON is an interchange export.

#ifndef LSA_SPACE_IO_H_
#define LSA_SPACE_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>

#include "lsa/semspace.h"

namespace lsa {

inline constexpr std::uint32_t kSpaceFormatVersion = 1;

void write_space(std::ostream &out, const SemanticSpace &space);
// Throws InputError on a truncated or foreign file.
SemanticSpace read_space(std::istream &in);

void save_space(const std::filesystem::path &path, const SemanticSpace &space);
SemanticSpace load_space(const std::filesystem::path &path);

void write_space_json(std::ostream &out, const SemanticSpace &space);

}  // namespace lsa

#endif  // LSA_SPACE_IO_H_
