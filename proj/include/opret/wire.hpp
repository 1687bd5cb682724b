#pragma once

#include "opret/bytes.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace opret {

struct WireError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Buffer ends in the middle of a field.
struct TruncatedError : WireError {
    using WireError::WireError;
};

// A declared script length exceeds the bytes that remain.
struct MalformedScriptLengthError : WireError {
    using WireError::WireError;
};

// Leftover bytes after the last transaction of a block.
struct TrailingBytesError : WireError {
    using WireError::WireError;
};

// A compact size was encoded wider than necessary. Only thrown when
// ParseOptions::reject_noncanonical is set; by default the value is
// accepted and counted, since historical chain data must parse.
struct NonCanonicalError : WireError {
    using WireError::WireError;
};

// Structurally invalid block (e.g. zero transactions; every real block
// carries at least the coinbase).
struct MalformedBlockError : WireError {
    using WireError::WireError;
};

struct CompactSize {
    std::uint64_t value = 0;
    std::size_t size = 0;   // bytes consumed: 1, 3, 5 or 9
    bool canonical = true;  // false when a wider form than necessary was used
};

// Decodes Bitcoin's variable-length integer at buf[offset].
CompactSize read_compact_size(ByteSpan buf, std::size_t offset);

// Appends the canonical encoding of value.
void write_compact_size(Bytes& out, std::uint64_t value);

struct TxInput {
    Hash256 prev_txid{};
    std::uint32_t prev_output_index = 0;
    Bytes in_script;
    std::uint32_t sequence = 0xffffffff;
};

struct TxOutput {
    std::uint64_t value = 0; // satoshi
    Bytes out_script;
};

struct Transaction {
    std::int32_t version = 1;
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    std::uint32_t lock_time = 0;

    // Derived: double-SHA-256 of the witness-stripped serialization,
    // stored in wire order.
    Hash256 txid{};

    // Extended-serialization transactions keep their witness stacks so
    // that re-serialization is bit-identical to the input.
    bool has_witness = false;
    std::vector<std::vector<Bytes>> witness; // one stack per input when present
};

struct BlockRecord {
    std::int32_t version = 0;
    Hash256 prev_block_hash{};
    Hash256 merkle_root{};
    std::uint32_t timestamp = 0;
    std::uint32_t difficulty_bits = 0;
    std::uint32_t nonce = 0;
    Hash256 block_hash{}; // derived: double-SHA-256 of the 80 header bytes
    std::vector<Transaction> transactions;
    std::optional<std::uint64_t> height;
};

struct ParseOptions {
    bool reject_noncanonical = false;
};

struct TxParse {
    Transaction tx;
    std::size_t consumed = 0;
    std::size_t noncanonical_sizes = 0;
};

struct BlockParse {
    BlockRecord block;
    std::size_t noncanonical_sizes = 0;
};

// Parses one serialized transaction starting at buf[offset]. Recognizes
// the segregated-witness marker; txid is always computed over the
// witness-stripped form.
TxParse parse_transaction(ByteSpan buf, std::size_t offset = 0, const ParseOptions& opts = {});

// Parses exactly one serialized block (80-byte header, compact tx count,
// transactions). Throws TrailingBytesError if bytes remain afterwards.
BlockParse parse_block(ByteSpan buf, const ParseOptions& opts = {});

Bytes serialize_transaction(const Transaction& tx, bool include_witness = true);
Bytes serialize_header(const BlockRecord& block);
Bytes serialize_block(const BlockRecord& block);

Hash256 compute_txid(const Transaction& tx);

// Fill in the derived hash fields of hand-built values.
void finalize_transaction(Transaction& tx);
void finalize_block(BlockRecord& block);

} // namespace opret
