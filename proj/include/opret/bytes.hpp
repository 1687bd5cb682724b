#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace opret {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;

struct HexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lowercase hex, no separators.
std::string to_hex(ByteSpan bytes);

// Throws HexError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

bool is_hex(std::string_view text);

// Hashes are kept in wire order internally and rendered byte-reversed,
// the convention used by block explorers.
std::string to_display_hex(const Hash256& hash);
Hash256 hash_from_display_hex(std::string_view hex);

inline Bytes bytes_of(std::string_view text) {
    return Bytes(text.begin(), text.end());
}

inline bool starts_with(ByteSpan data, ByteSpan prefix) {
    if (prefix.size() > data.size())
        return false;
    return std::equal(prefix.begin(), prefix.end(), data.begin());
}

} // namespace opret
