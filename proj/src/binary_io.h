// Little-endian scalar encoding shared by the binary file formats.

#ifndef LSA_SRC_BINARY_IO_H_
#define LSA_SRC_BINARY_IO_H_

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "lsa/error.h"

namespace lsa::binary {

template <typename T>
void put(std::ostream &out, T value) {
    std::array<char, sizeof(T)> bytes;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    }
    out.write(bytes.data(), bytes.size());
}

inline void put_double(std::ostream &out, double value) {
    put(out, std::bit_cast<std::uint64_t>(value));
}

template <typename T>
T get(std::istream &in) {
    std::array<unsigned char, sizeof(T)> bytes;
    if (!in.read(reinterpret_cast<char *>(bytes.data()), bytes.size())) {
        throw InputError("binary file is truncated");
    }
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(bytes[i]) << (8 * i);
    }
    return value;
}

inline double get_double(std::istream &in) {
    return std::bit_cast<double>(get<std::uint64_t>(in));
}

}  // namespace lsa::binary

#endif  // LSA_SRC_BINARY_IO_H_
