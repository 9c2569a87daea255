#ifndef PAIRSCAN_HASH_HPP
#define PAIRSCAN_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace pairscan {

// FNV-1a 64-bit. Content fingerprinting for manifests and idempotence
// checks, not a cryptographic hash.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

}  // namespace pairscan

#endif  // PAIRSCAN_HASH_HPP
