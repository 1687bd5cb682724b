#include "opret/wire.hpp"

#include "opret/hash.hpp"

#include <cstring>
#include <limits>

namespace opret {

namespace {

void need(ByteSpan buf, std::size_t offset, std::size_t count, const char* what) {
    if (offset > buf.size() || buf.size() - offset < count)
        throw TruncatedError(std::string("buffer ends inside ") + what);
}

std::uint16_t get_u16(ByteSpan buf, std::size_t offset) {
    return static_cast<std::uint16_t>(buf[offset] | buf[offset + 1] << 8);
}

std::uint32_t get_u32(ByteSpan buf, std::size_t offset) {
    return static_cast<std::uint32_t>(buf[offset]) |
           static_cast<std::uint32_t>(buf[offset + 1]) << 8 |
           static_cast<std::uint32_t>(buf[offset + 2]) << 16 |
           static_cast<std::uint32_t>(buf[offset + 3]) << 24;
}

std::uint64_t get_u64(ByteSpan buf, std::size_t offset) {
    std::uint64_t x = 0;
    for (int i = 7; i >= 0; --i)
        x = x << 8 | buf[offset + i];
    return x;
}

void put_u16(Bytes& out, std::uint16_t x) {
    out.push_back(static_cast<std::uint8_t>(x));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
}

void put_u32(Bytes& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_u64(Bytes& out, std::uint64_t x) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

Hash256 get_hash(ByteSpan buf, std::size_t offset) {
    Hash256 h;
    std::memcpy(h.data(), buf.data() + offset, h.size());
    return h;
}

// Shared parse cursor so every compact-size read funnels through one
// canonicality accounting point.
struct Reader {
    ByteSpan buf;
    std::size_t pos;
    std::size_t noncanonical = 0;
    const ParseOptions& opts;

    std::uint64_t compact(const char* what) {
        CompactSize cs = read_compact_size(buf, pos);
        if (!cs.canonical) {
            if (opts.reject_noncanonical)
                throw NonCanonicalError(std::string("non-canonical compact size in ") + what);
            ++noncanonical;
        }
        pos += cs.size;
        return cs.value;
    }

    Bytes script_bytes(std::uint64_t declared, const char* what) {
        if (declared > buf.size() - pos)
            throw MalformedScriptLengthError(std::string(what) +
                                             " length exceeds remaining bytes");
        Bytes out(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                  buf.begin() + static_cast<std::ptrdiff_t>(pos + declared));
        pos += declared;
        return out;
    }
};

} // namespace

CompactSize read_compact_size(ByteSpan buf, std::size_t offset) {
    need(buf, offset, 1, "compact size");
    std::uint8_t first = buf[offset];
    if (first < 0xfd)
        return {first, 1, true};
    if (first == 0xfd) {
        need(buf, offset, 3, "compact size");
        std::uint64_t v = get_u16(buf, offset + 1);
        return {v, 3, v >= 0xfd};
    }
    if (first == 0xfe) {
        need(buf, offset, 5, "compact size");
        std::uint64_t v = get_u32(buf, offset + 1);
        return {v, 5, v > 0xffff};
    }
    need(buf, offset, 9, "compact size");
    std::uint64_t v = get_u64(buf, offset + 1);
    return {v, 9, v > 0xffffffffull};
}

void write_compact_size(Bytes& out, std::uint64_t value) {
    if (value < 0xfd) {
        out.push_back(static_cast<std::uint8_t>(value));
    } else if (value <= 0xffff) {
        out.push_back(0xfd);
        put_u16(out, static_cast<std::uint16_t>(value));
    } else if (value <= 0xffffffffull) {
        out.push_back(0xfe);
        put_u32(out, static_cast<std::uint32_t>(value));
    } else {
        out.push_back(0xff);
        put_u64(out, value);
    }
}

TxParse parse_transaction(ByteSpan buf, std::size_t offset, const ParseOptions& opts) {
    Reader r{buf, offset, 0, opts};
    TxParse result;
    Transaction& tx = result.tx;

    need(buf, r.pos, 4, "transaction version");
    tx.version = static_cast<std::int32_t>(get_u32(buf, r.pos));
    r.pos += 4;

    // Extended serialization: a zero byte where the input count belongs,
    // followed by flag 0x01. No transaction inside a block has zero
    // inputs, so the zero byte is unambiguous.
    if (buf.size() - r.pos >= 2 && buf[r.pos] == 0x00 && buf[r.pos + 1] == 0x01) {
        tx.has_witness = true;
        r.pos += 2;
    }

    std::uint64_t input_count = r.compact("input count");
    tx.inputs.reserve(static_cast<std::size_t>(input_count));
    for (std::uint64_t i = 0; i < input_count; ++i) {
        TxInput in;
        need(buf, r.pos, 36, "input outpoint");
        in.prev_txid = get_hash(buf, r.pos);
        in.prev_output_index = get_u32(buf, r.pos + 32);
        r.pos += 36;
        std::uint64_t script_len = r.compact("input script length");
        in.in_script = r.script_bytes(script_len, "input script");
        need(buf, r.pos, 4, "input sequence");
        in.sequence = get_u32(buf, r.pos);
        r.pos += 4;
        tx.inputs.push_back(std::move(in));
    }

    std::uint64_t output_count = r.compact("output count");
    tx.outputs.reserve(static_cast<std::size_t>(output_count));
    for (std::uint64_t i = 0; i < output_count; ++i) {
        TxOutput out;
        need(buf, r.pos, 8, "output value");
        out.value = get_u64(buf, r.pos);
        r.pos += 8;
        std::uint64_t script_len = r.compact("output script length");
        out.out_script = r.script_bytes(script_len, "output script");
        tx.outputs.push_back(std::move(out));
    }

    if (tx.has_witness) {
        tx.witness.resize(tx.inputs.size());
        for (auto& stack : tx.witness) {
            std::uint64_t items = r.compact("witness stack size");
            stack.reserve(static_cast<std::size_t>(items));
            for (std::uint64_t i = 0; i < items; ++i) {
                std::uint64_t len = r.compact("witness item length");
                need(buf, r.pos, static_cast<std::size_t>(len), "witness item");
                stack.emplace_back(buf.begin() + static_cast<std::ptrdiff_t>(r.pos),
                                   buf.begin() + static_cast<std::ptrdiff_t>(r.pos + len));
                r.pos += len;
            }
        }
    }

    need(buf, r.pos, 4, "transaction lock time");
    tx.lock_time = get_u32(buf, r.pos);
    r.pos += 4;

    tx.txid = compute_txid(tx);
    result.consumed = r.pos - offset;
    result.noncanonical_sizes = r.noncanonical;
    return result;
}

BlockParse parse_block(ByteSpan buf, const ParseOptions& opts) {
    BlockParse result;
    BlockRecord& block = result.block;

    need(buf, 0, 80, "block header");
    block.version = static_cast<std::int32_t>(get_u32(buf, 0));
    block.prev_block_hash = get_hash(buf, 4);
    block.merkle_root = get_hash(buf, 36);
    block.timestamp = get_u32(buf, 68);
    block.difficulty_bits = get_u32(buf, 72);
    block.nonce = get_u32(buf, 76);
    block.block_hash = double_sha256(buf.subspan(0, 80));

    std::size_t pos = 80;
    CompactSize count = read_compact_size(buf, pos);
    if (!count.canonical) {
        if (opts.reject_noncanonical)
            throw NonCanonicalError("non-canonical transaction count");
        ++result.noncanonical_sizes;
    }
    pos += count.size;
    if (count.value == 0)
        throw MalformedBlockError("block carries no transactions");

    block.transactions.reserve(static_cast<std::size_t>(count.value));
    for (std::uint64_t i = 0; i < count.value; ++i) {
        TxParse parsed = parse_transaction(buf, pos, opts);
        pos += parsed.consumed;
        result.noncanonical_sizes += parsed.noncanonical_sizes;
        block.transactions.push_back(std::move(parsed.tx));
    }

    if (pos != buf.size())
        throw TrailingBytesError("bytes remain after the last transaction");
    return result;
}

Bytes serialize_transaction(const Transaction& tx, bool include_witness) {
    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(tx.version));
    bool witness = include_witness && tx.has_witness;
    if (witness) {
        out.push_back(0x00);
        out.push_back(0x01);
    }
    write_compact_size(out, tx.inputs.size());
    for (const TxInput& in : tx.inputs) {
        out.insert(out.end(), in.prev_txid.begin(), in.prev_txid.end());
        put_u32(out, in.prev_output_index);
        write_compact_size(out, in.in_script.size());
        out.insert(out.end(), in.in_script.begin(), in.in_script.end());
        put_u32(out, in.sequence);
    }
    write_compact_size(out, tx.outputs.size());
    for (const TxOutput& o : tx.outputs) {
        put_u64(out, o.value);
        write_compact_size(out, o.out_script.size());
        out.insert(out.end(), o.out_script.begin(), o.out_script.end());
    }
    if (witness) {
        for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
            const auto& stack = i < tx.witness.size() ? tx.witness[i] : std::vector<Bytes>{};
            write_compact_size(out, stack.size());
            for (const Bytes& item : stack) {
                write_compact_size(out, item.size());
                out.insert(out.end(), item.begin(), item.end());
            }
        }
    }
    put_u32(out, tx.lock_time);
    return out;
}

Bytes serialize_header(const BlockRecord& block) {
    Bytes out;
    out.reserve(80);
    put_u32(out, static_cast<std::uint32_t>(block.version));
    out.insert(out.end(), block.prev_block_hash.begin(), block.prev_block_hash.end());
    out.insert(out.end(), block.merkle_root.begin(), block.merkle_root.end());
    put_u32(out, block.timestamp);
    put_u32(out, block.difficulty_bits);
    put_u32(out, block.nonce);
    return out;
}

Bytes serialize_block(const BlockRecord& block) {
    Bytes out = serialize_header(block);
    write_compact_size(out, block.transactions.size());
    for (const Transaction& tx : block.transactions) {
        Bytes raw = serialize_transaction(tx);
        out.insert(out.end(), raw.begin(), raw.end());
    }
    return out;
}

Hash256 compute_txid(const Transaction& tx) {
    Bytes stripped = serialize_transaction(tx, /*include_witness=*/false);
    return double_sha256(ByteSpan(stripped.data(), stripped.size()));
}

void finalize_transaction(Transaction& tx) {
    tx.txid = compute_txid(tx);
}

void finalize_block(BlockRecord& block) {
    for (Transaction& tx : block.transactions)
        finalize_transaction(tx);
    Bytes header = serialize_header(block);
    block.block_hash = double_sha256(ByteSpan(header.data(), header.size()));
}

} // namespace opret
