#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace speedpart {

// 64-bit FNV-1a over a little-endian byte image. Doubles are absorbed as
// their IEEE-754 bits, least significant byte first, so digests are
// endian-independent.
class Fnv1a64 {
public:
    void absorb_byte(std::uint8_t b) {
        hash_ ^= b;
        hash_ *= 1099511628211ULL;
    }

    void absorb_u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) absorb_byte(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void absorb_double(double v) { absorb_u64(std::bit_cast<std::uint64_t>(v)); }

    std::uint64_t value() const { return hash_; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = hash_;
        for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xF];
        return out;
    }

private:
    std::uint64_t hash_ = 14695981039346656037ULL;
};

} // namespace speedpart
