#include "opret/classify.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>

namespace opret {

std::string_view category_name(Category category) {
    switch (category) {
    case Category::Assets: return "Assets";
    case Category::DocumentNotary: return "Document Notary";
    case Category::DigitalArts: return "Digital Arts";
    case Category::Other: return "Other";
    case Category::Empty: return "Empty";
    case Category::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::optional<Category> category_from_name(std::string_view name) {
    if (name == "Assets") return Category::Assets;
    if (name == "Document Notary") return Category::DocumentNotary;
    if (name == "Digital Arts") return Category::DigitalArts;
    if (name == "Other") return Category::Other;
    if (name == "Empty") return Category::Empty;
    if (name == "Unknown") return Category::Unknown;
    return std::nullopt;
}

ProtocolRegistry::ProtocolRegistry(std::vector<ProtocolEntry> entries)
    : entries_(std::move(entries)) {
    for (const ProtocolEntry& entry : entries_) {
        if (entry.name.empty())
            throw RegistryError("protocol entry with empty name");
        if (entry.category == Category::Empty || entry.category == Category::Unknown)
            throw RegistryError("protocol '" + entry.name +
                                "' assigned to a sentinel category");
        if (entry.identifiers.empty())
            throw RegistryError("protocol '" + entry.name + "' lists no identifiers");
        for (const Bytes& id : entry.identifiers) {
            if (id.empty())
                throw RegistryError("protocol '" + entry.name + "' has an empty identifier");
            if (id.size() > 16)
                throw RegistryError("protocol '" + entry.name +
                                    "' has an identifier longer than 16 bytes");
        }
    }
    // Pairwise checks; the registry is small (tens of identifiers).
    for (std::size_t a = 0; a < entries_.size(); ++a) {
        for (const Bytes& ida : entries_[a].identifiers) {
            for (std::size_t b = 0; b < entries_.size(); ++b) {
                for (const Bytes& idb : entries_[b].identifiers) {
                    if (a == b && &ida == &idb)
                        continue;
                    if (ida == idb)
                        throw DuplicateIdentifierError(
                            "identifier '" + to_hex(ida) + "' appears more than once ('" +
                            entries_[a].name + "' and '" + entries_[b].name + "')");
                    if (a != b && starts_with(idb, ida))
                        throw CrossProtocolPrefixConflictError(
                            "identifier '" + to_hex(ida) + "' of '" + entries_[a].name +
                            "' is a prefix of '" + to_hex(idb) + "' of '" + entries_[b].name +
                            "'");
                }
            }
        }
    }
}

std::size_t ProtocolRegistry::identifier_count() const {
    std::size_t n = 0;
    for (const ProtocolEntry& entry : entries_)
        n += entry.identifiers.size();
    return n;
}

std::optional<ProtocolRegistry::Match> ProtocolRegistry::longest_match(ByteSpan payload) const {
    std::optional<Match> best;
    for (const ProtocolEntry& entry : entries_) {
        for (const Bytes& id : entry.identifiers) {
            if (!starts_with(payload, id))
                continue;
            if (!best || id.size() > best->identifier->size())
                best = Match{&entry, &id};
        }
    }
    return best;
}

namespace {

Bytes decode_identifier(const std::string& text, const std::string& protocol) {
    if (text.rfind("0x", 0) == 0) {
        std::string hex = text.substr(2);
        if (hex.empty() || !is_hex(hex))
            throw RegistryError("protocol '" + protocol + "': bad hex identifier '" + text +
                                "'");
        return from_hex(hex);
    }
    Bytes out;
    out.reserve(text.size());
    for (char c : text) {
        auto byte = static_cast<unsigned char>(c);
        if (byte > 0x7f)
            throw RegistryError("protocol '" + protocol +
                                "': identifier characters must be 7-bit ('" + text + "')");
        out.push_back(byte);
    }
    return out;
}

ProtocolRegistry registry_from_json(const nlohmann::json& doc) {
    const nlohmann::json* list = &doc;
    if (doc.is_object()) {
        if (!doc.contains("protocols") || !doc["protocols"].is_array())
            throw RegistryError("registry object lacks a 'protocols' list");
        list = &doc["protocols"];
    } else if (!doc.is_array()) {
        throw RegistryError("registry document must be a list or an object");
    }

    std::vector<ProtocolEntry> entries;
    entries.reserve(list->size());
    for (const auto& item : *list) {
        if (!item.is_object() || !item.contains("name") || !item.contains("category") ||
            !item.contains("identifiers"))
            throw RegistryError("registry entry missing name/category/identifiers");
        ProtocolEntry entry;
        entry.name = item["name"].get<std::string>();

        auto category = category_from_name(item["category"].get<std::string>());
        if (!category || *category == Category::Empty || *category == Category::Unknown)
            throw UnknownCategoryNameError("protocol '" + entry.name +
                                           "': unknown category name '" +
                                           item["category"].get<std::string>() + "'");
        entry.category = *category;

        if (!item["identifiers"].is_array())
            throw RegistryError("protocol '" + entry.name + "': identifiers must be a list");
        for (const auto& id : item["identifiers"])
            entry.identifiers.push_back(decode_identifier(id.get<std::string>(), entry.name));
        entries.push_back(std::move(entry));
    }
    return ProtocolRegistry(std::move(entries));
}

} // namespace

ProtocolRegistry load_registry(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw RegistryError(std::string("registry document does not parse: ") + e.what());
    }
    return registry_from_json(doc);
}

ProtocolRegistry load_registry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw RegistryError("cannot open registry file: " + path);
    return load_registry(in);
}

ClassifyOutcome classify_payload(ByteSpan payload, const ProtocolRegistry& registry) {
    if (payload.empty())
        return {std::string(kEmptyLabel), Category::Empty, std::nullopt};
    if (auto match = registry.longest_match(payload))
        return {match->entry->name, match->entry->category, *match->identifier};
    return {std::string(kUnknownLabel), Category::Unknown, std::nullopt};
}

std::vector<ClassifiedRecord> classify_stream(const std::vector<OpReturnRecord>& records,
                                              const ProtocolRegistry& registry) {
    std::vector<ClassifiedRecord> out;
    out.reserve(records.size());
    for (const OpReturnRecord& record : records) {
        ClassifyOutcome outcome =
            classify_payload(ByteSpan(record.metadata.data(), record.metadata.size()), registry);
        out.push_back({record, std::move(outcome.label), outcome.category,
                       std::move(outcome.matched_identifier)});
    }
    return out;
}

} // namespace opret
