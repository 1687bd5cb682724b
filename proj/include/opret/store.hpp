#pragma once

#include "opret/classify.hpp"
#include "opret/record.hpp"
#include "opret/script.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace opret {

// A line of an imported document could not be decoded.
struct ImportError : std::runtime_error {
    std::size_t line_number;
    ImportError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_number(line) {}
};

struct MalformedLineError : ImportError {
    using ImportError::ImportError;
};

struct OddLengthHexError : ImportError {
    using ImportError::ImportError;
};

// A persisted batch failed its checksum or framing check.
struct StoreCorruptError : std::runtime_error {
    std::uint64_t offset; // byte offset of the offending batch
    StoreCorruptError(std::uint64_t at, const std::string& what)
        : std::runtime_error(what + " (offset " + std::to_string(at) + ")"), offset(at) {}
};

struct ScanManifest {
    std::uint64_t files_scanned = 0;
    std::uint64_t blocks_read = 0;
    std::uint64_t transactions_read = 0;
    std::uint64_t opreturn_outputs_found = 0;
    std::uint64_t nonstandard_outputs = 0; // only counted when a policy is given
    std::vector<std::string> defects;

    void merge(const ScanManifest& other);
};

struct ScanResult {
    std::vector<OpReturnRecord> records;
    ScanManifest manifest;
};

// Walks every *.dat file of the directory (filename order) through the
// raw block framing: repeated [magic f9beb4d9][u32le length][block],
// with zero padding tolerated at tails. A wrong magic is logged and the
// scanner resynchronizes on the next magic occurrence. One record is
// emitted per OP_RETURN output. With thread_count > 1 files are scanned
// concurrently; output order stays the filename order.
ScanResult scan_block_files(const std::filesystem::path& directory,
                            const std::optional<StandardnessPolicy>& policy = std::nullopt,
                            unsigned thread_count = 1);

// Record extraction for one already-framed block payload.
void scan_block_bytes(ByteSpan block_bytes, const std::optional<StandardnessPolicy>& policy,
                      std::vector<OpReturnRecord>& records, ScanManifest& manifest);

// Line-delimited document of {txid, block_hash, block_time, metadata,
// output_index}; hashes in display hex, metadata in plain hex.
std::vector<OpReturnRecord> import_records(std::istream& in);

// Append-only record store: line-delimited records, one checksum trailer
// line per appended batch. Re-persisting a batch whose checksum is
// already present is a no-op.
class RecordStore {
public:
    explicit RecordStore(std::filesystem::path file) : path_(std::move(file)) {}

    const std::filesystem::path& path() const { return path_; }

    // Returns the number of records appended (0 when the batch was
    // already present).
    std::size_t persist(const std::vector<OpReturnRecord>& records);
    std::size_t persist_classified(const std::vector<ClassifiedRecord>& records);

    std::vector<OpReturnRecord> load() const;
    std::vector<ClassifiedRecord> load_classified() const;

private:
    std::filesystem::path path_;
};

} // namespace opret
