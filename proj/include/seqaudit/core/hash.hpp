#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace seqaudit {

// Streaming FNV-1a (64-bit). Used for file checksums, config fingerprints
// and parameter digests.
class Fnv1a64 {
public:
    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ull;
        }
    }
    void update(std::string_view s) { update(s.data(), s.size()); }

    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    Fnv1a64 h;
    h.update(data, len);
    return h.digest();
}

inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace seqaudit
