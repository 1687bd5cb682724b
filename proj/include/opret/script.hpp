#pragma once

#include "opret/bytes.hpp"

#include <string_view>

namespace opret {

// Opcodes the extractor needs to recognize.
inline constexpr std::uint8_t OP_0 = 0x00;
inline constexpr std::uint8_t OP_PUSHDATA1 = 0x4c;
inline constexpr std::uint8_t OP_PUSHDATA2 = 0x4d;
inline constexpr std::uint8_t OP_PUSHDATA4 = 0x4e;
inline constexpr std::uint8_t OP_1NEGATE = 0x4f;
inline constexpr std::uint8_t OP_1 = 0x51;
inline constexpr std::uint8_t OP_16 = 0x60;
inline constexpr std::uint8_t OP_RETURN = 0x6a;
inline constexpr std::uint8_t OP_DUP = 0x76;
inline constexpr std::uint8_t OP_EQUALVERIFY = 0x88;
inline constexpr std::uint8_t OP_HASH160 = 0xa9;
inline constexpr std::uint8_t OP_CHECKSIG = 0xac;

enum class ScriptClass {
    NullData,        // leads with OP_RETURN
    PayToPubkeyHash, // the 25-byte DUP/HASH160/push-20/EQUALVERIFY/CHECKSIG template
    Other,
};

// Total over arbitrary byte strings; never throws.
ScriptClass classify_script(ByteSpan out_script) noexcept;

struct OpReturnPayload {
    Bytes data;                          // concatenated push payloads, opcode bytes excluded
    std::uint32_t push_count = 0;        // push operations decoded (zero-length ones included)
    bool nonpush_opcodes_present = false;
    std::size_t script_length = 0;
    bool truncated_push = false;         // a declared push overran the script
};

struct NotNullDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decodes the bytes after OP_RETURN as a series of push operations.
// Small-integer opcodes (OP_0, OP_1..OP_16, OP_1NEGATE) and any other
// non-push opcode contribute no data bytes and set
// nonpush_opcodes_present. A push whose declared length overruns the
// script keeps the bytes that exist and flags truncated_push.
// Throws NotNullDataError unless classify_script(out_script) is NullData.
OpReturnPayload extract_opreturn_payload(ByteSpan out_script);

enum class PolicyEra {
    Limit40,      // first standard relay rule: 40 payload bytes
    Limit80,      // raised to 80 payload bytes
    Limit83Script // expressed as 83 bytes of total script
};

struct StandardnessPolicy {
    PolicyEra era;
    std::size_t max_payload_bytes;
    std::size_t max_script_bytes;
    std::string_view label;
};

inline constexpr StandardnessPolicy kPolicy40{PolicyEra::Limit40, 40, 42, "40-byte"};
inline constexpr StandardnessPolicy kPolicy80{PolicyEra::Limit80, 80, 83, "80-byte"};
inline constexpr StandardnessPolicy kPolicy83{PolicyEra::Limit83Script, 80, 83, "83-byte-script"};

// True iff the payload fits the policy: payload bytes against the 40/80
// limits, total script length against the 83-byte-script form.
bool check_standardness(const OpReturnPayload& payload, const StandardnessPolicy& policy) noexcept;

} // namespace opret
