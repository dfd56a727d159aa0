#pragma once

#include <cstdint>
#include <istream>
#include <ostream>

#include "moatwalk/errors.hpp"

namespace moatwalk::detail {

inline void write_u32(std::ostream& out, uint32_t v) {
    char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                 char((v >> 24) & 0xff)};
    out.write(b, 4);
}

inline void write_u64(std::ostream& out, uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

inline uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw CacheError("truncated cache file");
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 |
           uint32_t(b[3]) << 24;
}

inline uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw CacheError("truncated cache file");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char got[4];
    in.read(got, 4);
    if (!in || got[0] != magic[0] || got[1] != magic[1] || got[2] != magic[2] ||
        got[3] != magic[3])
        throw CacheError(std::string("bad magic, expected ") + magic);
}

}  // namespace moatwalk::detail
