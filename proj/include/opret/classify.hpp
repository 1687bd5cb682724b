#pragma once

#include "opret/bytes.hpp"
#include "opret/record.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opret {

enum class Category {
    Assets,
    DocumentNotary,
    DigitalArts,
    Other,
    Empty,
    Unknown,
};

std::string_view category_name(Category category);
std::optional<Category> category_from_name(std::string_view name);

struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An identifier of one protocol is a byte-prefix of another protocol's.
struct CrossProtocolPrefixConflictError : RegistryError {
    using RegistryError::RegistryError;
};

struct DuplicateIdentifierError : RegistryError {
    using RegistryError::RegistryError;
};

struct UnknownCategoryNameError : RegistryError {
    using RegistryError::RegistryError;
};

struct ProtocolEntry {
    std::string name;
    Category category; // one of the four protocol categories
    std::vector<Bytes> identifiers;
};

// Identifier-prefix table. Validated on construction:
//   - names and identifiers non-empty, identifiers at most 16 bytes
//   - no identifier repeated anywhere in the registry
//   - no identifier of one protocol is a prefix of another protocol's
//     (nesting inside the same protocol is legal, e.g. "Fa"/"Factom!!")
class ProtocolRegistry {
public:
    explicit ProtocolRegistry(std::vector<ProtocolEntry> entries);

    const std::vector<ProtocolEntry>& entries() const { return entries_; }
    std::size_t protocol_count() const { return entries_.size(); }
    std::size_t identifier_count() const;

    struct Match {
        const ProtocolEntry* entry;
        const Bytes* identifier;
    };

    // Longest identifier that is a byte-prefix of payload, if any.
    std::optional<Match> longest_match(ByteSpan payload) const;

private:
    std::vector<ProtocolEntry> entries_;
};

// Registry document: either a top-level list of
//   {name, category, identifiers: [string | "0x"+hex]}
// or an object {"version": n, "protocols": [...]}. Quoted identifiers are
// encoded byte-for-byte (7-bit characters only); "0x" literals decode to
// raw bytes.
ProtocolRegistry load_registry(std::istream& in);
ProtocolRegistry load_registry_file(const std::string& path);

inline constexpr std::string_view kEmptyLabel = "Empty";
inline constexpr std::string_view kUnknownLabel = "Unknown";

struct ClassifyOutcome {
    std::string label; // protocol name, or the Empty/Unknown sentinel
    Category category;
    std::optional<Bytes> matched_identifier;
};

// Empty payload -> Empty; longest identifier prefix -> its protocol;
// otherwise Unknown.
ClassifyOutcome classify_payload(ByteSpan payload, const ProtocolRegistry& registry);

struct ClassifiedRecord {
    OpReturnRecord record;
    std::string label;
    Category category;
    std::optional<Bytes> matched_identifier;

    bool operator==(const ClassifiedRecord&) const = default;
};

// Order-preserving map of classify_payload over the records.
std::vector<ClassifiedRecord> classify_stream(const std::vector<OpReturnRecord>& records,
                                              const ProtocolRegistry& registry);

} // namespace opret
