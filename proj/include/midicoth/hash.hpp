#ifndef MIDICOTH_HASH_HPP
#define MIDICOTH_HASH_HPP

#include <cstddef>
#include <cstdint>

namespace midicoth {

inline constexpr uint64_t kFnvOffsetBasis = 1469598103934665603ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

// FNV-1a/64, the one hash primitive used project-wide (context keys,
// word hashes, bit-context grouping, state digests).
inline constexpr uint64_t fnv1a(const uint8_t* data, size_t len,
                                uint64_t h = kFnvOffsetBasis) {
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= kFnvPrime;
    }
    return h;
}

inline constexpr uint64_t fnv1a_byte(uint8_t b, uint64_t h) {
    h ^= b;
    h *= kFnvPrime;
    return h;
}

inline uint64_t fnv1a_u64(uint64_t v, uint64_t h) {
    for (int i = 0; i < 8; ++i) {
        h = fnv1a_byte(static_cast<uint8_t>(v >> (8 * i)), h);
    }
    return h;
}

} // namespace midicoth

#endif
