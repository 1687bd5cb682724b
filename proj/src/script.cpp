#include "opret/script.hpp"

namespace opret {

ScriptClass classify_script(ByteSpan out_script) noexcept {
    if (!out_script.empty() && out_script[0] == OP_RETURN)
        return ScriptClass::NullData;
    if (out_script.size() == 25 && out_script[0] == OP_DUP && out_script[1] == OP_HASH160 &&
        out_script[2] == 0x14 && out_script[23] == OP_EQUALVERIFY && out_script[24] == OP_CHECKSIG)
        return ScriptClass::PayToPubkeyHash;
    return ScriptClass::Other;
}

OpReturnPayload extract_opreturn_payload(ByteSpan out_script) {
    if (classify_script(out_script) != ScriptClass::NullData)
        throw NotNullDataError("script does not lead with OP_RETURN");

    OpReturnPayload payload;
    payload.script_length = out_script.size();

    std::size_t pos = 1; // past OP_RETURN
    while (pos < out_script.size()) {
        std::uint8_t op = out_script[pos++];

        std::size_t declared = 0;
        if (op >= 0x01 && op <= 0x4b) {
            declared = op;
        } else if (op == OP_PUSHDATA1) {
            if (pos + 1 > out_script.size()) {
                payload.truncated_push = true;
                break;
            }
            declared = out_script[pos];
            pos += 1;
        } else if (op == OP_PUSHDATA2) {
            if (pos + 2 > out_script.size()) {
                payload.truncated_push = true;
                break;
            }
            declared = static_cast<std::size_t>(out_script[pos]) |
                       static_cast<std::size_t>(out_script[pos + 1]) << 8;
            pos += 2;
        } else if (op == OP_PUSHDATA4) {
            if (pos + 4 > out_script.size()) {
                payload.truncated_push = true;
                break;
            }
            declared = static_cast<std::size_t>(out_script[pos]) |
                       static_cast<std::size_t>(out_script[pos + 1]) << 8 |
                       static_cast<std::size_t>(out_script[pos + 2]) << 16 |
                       static_cast<std::size_t>(out_script[pos + 3]) << 24;
            pos += 4;
        } else {
            // OP_0, OP_1..OP_16, OP_1NEGATE and every other opcode: no
            // data bytes carried.
            payload.nonpush_opcodes_present = true;
            continue;
        }

        ++payload.push_count;
        std::size_t available = out_script.size() - pos;
        if (declared > available) {
            payload.data.insert(payload.data.end(), out_script.begin() + pos, out_script.end());
            payload.truncated_push = true;
            pos = out_script.size();
            break;
        }
        payload.data.insert(payload.data.end(), out_script.begin() + pos,
                            out_script.begin() + pos + declared);
        pos += declared;
    }
    return payload;
}

bool check_standardness(const OpReturnPayload& payload, const StandardnessPolicy& policy) noexcept {
    if (policy.era == PolicyEra::Limit83Script)
        return payload.script_length <= policy.max_script_bytes;
    return payload.data.size() <= policy.max_payload_bytes;
}

} // namespace opret
