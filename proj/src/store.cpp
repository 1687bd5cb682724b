#include "opret/store.hpp"

#include "opret/hash.hpp"
#include "opret/wire.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <istream>
#include <set>
#include <sstream>

namespace opret {

namespace {

constexpr std::uint8_t kMagic[4] = {0xf9, 0xbe, 0xb4, 0xd9};

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::filesystem::filesystem_error(
            "cannot open block file", path,
            std::make_error_code(std::errc::no_such_file_or_directory));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string data = std::move(buffer).str();
    return Bytes(data.begin(), data.end());
}

std::size_t find_magic(ByteSpan buf, std::size_t from) {
    if (buf.size() < 4)
        return std::string::npos;
    for (std::size_t i = from; i + 4 <= buf.size(); ++i) {
        if (buf[i] == kMagic[0] && buf[i + 1] == kMagic[1] && buf[i + 2] == kMagic[2] &&
            buf[i + 3] == kMagic[3])
            return i;
    }
    return std::string::npos;
}

ScanResult scan_one_file(const std::filesystem::path& path,
                         const std::optional<StandardnessPolicy>& policy) {
    ScanResult result;
    result.manifest.files_scanned = 1;
    Bytes data = read_file(path);
    ByteSpan buf(data.data(), data.size());

    std::size_t pos = 0;
    while (pos < buf.size()) {
        if (buf[pos] == 0x00) {
            // Tail padding; if non-zero bytes follow, the magic check
            // below deals with them.
            std::size_t zeros = pos;
            while (zeros < buf.size() && buf[zeros] == 0x00)
                ++zeros;
            if (zeros == buf.size())
                break;
            pos = zeros;
        }
        if (buf.size() - pos < 8) {
            result.manifest.defects.push_back(path.filename().string() +
                                              ": truncated framing at offset " +
                                              std::to_string(pos));
            break;
        }
        if (!(buf[pos] == kMagic[0] && buf[pos + 1] == kMagic[1] && buf[pos + 2] == kMagic[2] &&
              buf[pos + 3] == kMagic[3])) {
            result.manifest.defects.push_back(path.filename().string() +
                                              ": bad magic at offset " + std::to_string(pos));
            std::size_t next = find_magic(buf, pos + 1);
            if (next == std::string::npos)
                break;
            pos = next;
            continue;
        }
        std::uint32_t length = static_cast<std::uint32_t>(buf[pos + 4]) |
                               static_cast<std::uint32_t>(buf[pos + 5]) << 8 |
                               static_cast<std::uint32_t>(buf[pos + 6]) << 16 |
                               static_cast<std::uint32_t>(buf[pos + 7]) << 24;
        if (length > buf.size() - pos - 8) {
            result.manifest.defects.push_back(path.filename().string() +
                                              ": truncated block at offset " +
                                              std::to_string(pos));
            break;
        }
        scan_block_bytes(buf.subspan(pos + 8, length), policy, result.records, result.manifest);
        pos += 8 + length;
    }
    return result;
}

const char* require_string(const nlohmann::json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw MalformedLineError(line, std::string("missing string field '") + key + "'");
    return it->get_ref<const std::string&>().c_str();
}

Bytes hex_field(const nlohmann::json& obj, const char* key, std::size_t line) {
    std::string text = require_string(obj, key, line);
    if (text.size() % 2 != 0)
        throw OddLengthHexError(line, std::string("odd-length hex in '") + key + "'");
    try {
        return from_hex(text);
    } catch (const HexError& e) {
        throw MalformedLineError(line, std::string("bad hex in '") + key + "': " + e.what());
    }
}

Hash256 hash_field(const nlohmann::json& obj, const char* key, std::size_t line) {
    Bytes raw = hex_field(obj, key, line);
    if (raw.size() != 32)
        throw MalformedLineError(line, std::string("'") + key + "' must be 64 hex characters");
    Hash256 out;
    std::reverse_copy(raw.begin(), raw.end(), out.begin());
    return out;
}

OpReturnRecord record_from_json(const nlohmann::json& obj, std::size_t line) {
    if (!obj.is_object())
        throw MalformedLineError(line, "not an object");
    OpReturnRecord record;
    record.txid = hash_field(obj, "txid", line);
    record.block_hash = hash_field(obj, "block_hash", line);
    auto time_it = obj.find("block_time");
    if (time_it == obj.end() || !time_it->is_number_integer())
        throw MalformedLineError(line, "missing integer field 'block_time'");
    record.block_timestamp = time_it->get<std::int64_t>();
    record.metadata = hex_field(obj, "metadata", line);
    auto index_it = obj.find("output_index");
    if (index_it == obj.end() || !index_it->is_number_unsigned())
        throw MalformedLineError(line, "missing unsigned field 'output_index'");
    record.output_index = index_it->get<std::uint32_t>();
    return record;
}

nlohmann::json record_to_json(const OpReturnRecord& record) {
    return {
        {"txid", to_display_hex(record.txid)},
        {"block_hash", to_display_hex(record.block_hash)},
        {"block_time", record.block_timestamp},
        {"metadata", to_hex(ByteSpan(record.metadata.data(), record.metadata.size()))},
        {"output_index", record.output_index},
    };
}

nlohmann::json classified_to_json(const ClassifiedRecord& record) {
    nlohmann::json obj = record_to_json(record.record);
    obj["label"] = record.label;
    obj["category"] = std::string(category_name(record.category));
    if (record.matched_identifier)
        obj["matched_identifier"] =
            to_hex(ByteSpan(record.matched_identifier->data(), record.matched_identifier->size()));
    return obj;
}

ClassifiedRecord classified_from_json(const nlohmann::json& obj, std::size_t line) {
    ClassifiedRecord record;
    record.record = record_from_json(obj, line);
    record.label = require_string(obj, "label", line);
    auto category = category_from_name(require_string(obj, "category", line));
    if (!category)
        throw MalformedLineError(line, "unknown category name");
    record.category = *category;
    if (auto it = obj.find("matched_identifier"); it != obj.end())
        record.matched_identifier = hex_field(obj, "matched_identifier", line);
    return record;
}

nlohmann::json parse_line(const std::string& text, std::size_t line) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedLineError(line, std::string("not valid JSON: ") + e.what());
    }
}

bool is_checksum_line(const nlohmann::json& obj) {
    return obj.is_object() && obj.contains("checksum");
}

std::string batch_checksum(const std::vector<std::string>& lines) {
    Bytes all;
    for (const std::string& line : lines) {
        all.insert(all.end(), line.begin(), line.end());
        all.push_back('\n');
    }
    return to_hex(sha256(ByteSpan(all.data(), all.size())));
}

// Reads every batch of the store, validating trailers, and hands each
// record line to sink(text, line_number).
template <typename Sink>
void read_store(const std::filesystem::path& path, std::set<std::string>* checksums, Sink sink) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return; // absent store == empty store

    std::string text;
    std::vector<std::string> batch;
    std::vector<std::size_t> batch_line_numbers;
    std::uint64_t batch_offset = 0;
    std::uint64_t offset = 0;
    std::size_t line_number = 0;
    while (std::getline(in, text)) {
        ++line_number;
        std::uint64_t line_offset = offset;
        offset += text.size() + 1;
        nlohmann::json obj = parse_line(text, line_number);
        if (!is_checksum_line(obj)) {
            if (batch.empty())
                batch_offset = line_offset;
            batch.push_back(text);
            batch_line_numbers.push_back(line_number);
            continue;
        }
        std::string expected = obj["checksum"].get<std::string>();
        std::uint64_t declared = obj.value("records", static_cast<std::uint64_t>(0));
        if (declared != batch.size())
            throw StoreCorruptError(batch_offset, "batch record count mismatch");
        if (batch_checksum(batch) != expected)
            throw StoreCorruptError(batch_offset, "batch checksum mismatch");
        if (checksums)
            checksums->insert(expected);
        for (std::size_t i = 0; i < batch.size(); ++i)
            sink(batch[i], batch_line_numbers[i]);
        batch.clear();
        batch_line_numbers.clear();
    }
    if (!batch.empty())
        throw StoreCorruptError(batch_offset, "batch without checksum trailer");
}

std::size_t append_batch(const std::filesystem::path& path, std::vector<std::string> lines) {
    if (lines.empty())
        return 0;
    std::set<std::string> existing;
    read_store(path, &existing, [](const std::string&, std::size_t) {});
    std::string checksum = batch_checksum(lines);
    if (existing.count(checksum))
        return 0;

    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out)
        throw StoreCorruptError(0, "cannot open store for append: " + path.string());
    for (const std::string& line : lines)
        out << line << '\n';
    nlohmann::json trailer = {{"checksum", checksum}, {"records", lines.size()}};
    out << trailer.dump() << '\n';
    out.flush();
    if (!out)
        throw StoreCorruptError(0, "write failed: " + path.string());
    return lines.size();
}

} // namespace

void ScanManifest::merge(const ScanManifest& other) {
    files_scanned += other.files_scanned;
    blocks_read += other.blocks_read;
    transactions_read += other.transactions_read;
    opreturn_outputs_found += other.opreturn_outputs_found;
    nonstandard_outputs += other.nonstandard_outputs;
    defects.insert(defects.end(), other.defects.begin(), other.defects.end());
}

void scan_block_bytes(ByteSpan block_bytes, const std::optional<StandardnessPolicy>& policy,
                      std::vector<OpReturnRecord>& records, ScanManifest& manifest) {
    BlockParse parsed;
    try {
        parsed = parse_block(block_bytes);
    } catch (const WireError& e) {
        manifest.defects.push_back(std::string("block does not parse: ") + e.what());
        return;
    }
    ++manifest.blocks_read;
    const BlockRecord& block = parsed.block;
    for (const Transaction& tx : block.transactions) {
        ++manifest.transactions_read;
        for (std::size_t n = 0; n < tx.outputs.size(); ++n) {
            const TxOutput& output = tx.outputs[n];
            ByteSpan script(output.out_script.data(), output.out_script.size());
            if (classify_script(script) != ScriptClass::NullData)
                continue;
            OpReturnPayload payload = extract_opreturn_payload(script);
            if (payload.truncated_push)
                manifest.defects.push_back("truncated push in " + to_display_hex(tx.txid) +
                                           " output " + std::to_string(n));
            if (policy && !check_standardness(payload, *policy))
                ++manifest.nonstandard_outputs;
            OpReturnRecord record;
            record.txid = tx.txid;
            record.block_hash = block.block_hash;
            record.block_timestamp = block.timestamp;
            record.metadata = std::move(payload.data);
            record.output_index = static_cast<std::uint32_t>(n);
            records.push_back(std::move(record));
            ++manifest.opreturn_outputs_found;
        }
    }
}

ScanResult scan_block_files(const std::filesystem::path& directory,
                            const std::optional<StandardnessPolicy>& policy,
                            unsigned thread_count) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (entry.is_regular_file() && entry.path().extension() == ".dat")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    ScanResult result;
    if (thread_count <= 1 || files.size() < 2) {
        for (const auto& path : files) {
            ScanResult one = scan_one_file(path, policy);
            result.manifest.merge(one.manifest);
            result.records.insert(result.records.end(),
                                  std::make_move_iterator(one.records.begin()),
                                  std::make_move_iterator(one.records.end()));
        }
        return result;
    }

    std::vector<std::future<ScanResult>> parts;
    parts.reserve(files.size());
    for (const auto& path : files)
        parts.push_back(std::async(std::launch::async, scan_one_file, path, policy));
    for (auto& part : parts) {
        ScanResult one = part.get();
        result.manifest.merge(one.manifest);
        result.records.insert(result.records.end(), std::make_move_iterator(one.records.begin()),
                              std::make_move_iterator(one.records.end()));
    }
    return result;
}

std::vector<OpReturnRecord> import_records(std::istream& in) {
    std::vector<OpReturnRecord> records;
    std::string text;
    std::size_t line_number = 0;
    while (std::getline(in, text)) {
        ++line_number;
        if (text.empty())
            continue;
        records.push_back(record_from_json(parse_line(text, line_number), line_number));
    }
    return records;
}

std::size_t RecordStore::persist(const std::vector<OpReturnRecord>& records) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const OpReturnRecord& record : records)
        lines.push_back(record_to_json(record).dump());
    return append_batch(path_, std::move(lines));
}

std::size_t RecordStore::persist_classified(const std::vector<ClassifiedRecord>& records) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const ClassifiedRecord& record : records)
        lines.push_back(classified_to_json(record).dump());
    return append_batch(path_, std::move(lines));
}

std::vector<OpReturnRecord> RecordStore::load() const {
    std::vector<OpReturnRecord> records;
    read_store(path_, nullptr, [&](const std::string& text, std::size_t line) {
        records.push_back(record_from_json(parse_line(text, line), line));
    });
    return records;
}

std::vector<ClassifiedRecord> RecordStore::load_classified() const {
    std::vector<ClassifiedRecord> records;
    read_store(path_, nullptr, [&](const std::string& text, std::size_t line) {
        records.push_back(classified_from_json(parse_line(text, line), line));
    });
    return records;
}

} // namespace opret
