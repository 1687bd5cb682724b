#pragma once

#include "opret/bytes.hpp"

#include <cstdint>

namespace opret {

// The four persisted fields per OP_RETURN output, plus the output index
// so that transactions carrying several OP_RETURN outputs stay
// distinguishable.
struct OpReturnRecord {
    Hash256 txid{};
    Hash256 block_hash{};
    std::int64_t block_timestamp = 0; // epoch seconds; <= 0 means unknown
    Bytes metadata;
    std::uint32_t output_index = 0;

    bool operator==(const OpReturnRecord&) const = default;
};

} // namespace opret
