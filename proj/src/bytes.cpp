#include "opret/bytes.hpp"

#include <algorithm>

namespace opret {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(ByteSpan bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw HexError("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw HexError("invalid hex character");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

bool is_hex(std::string_view text) {
    if (text.size() % 2 != 0)
        return false;
    return std::all_of(text.begin(), text.end(), [](char c) { return hex_value(c) >= 0; });
}

std::string to_display_hex(const Hash256& hash) {
    Hash256 reversed;
    std::reverse_copy(hash.begin(), hash.end(), reversed.begin());
    return to_hex(ByteSpan(reversed.data(), reversed.size()));
}

Hash256 hash_from_display_hex(std::string_view hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 32)
        throw HexError("hash must be 64 hex characters");
    Hash256 out;
    std::reverse_copy(raw.begin(), raw.end(), out.begin());
    return out;
}

} // namespace opret
