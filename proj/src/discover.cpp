#include "opret/discover.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <unordered_map>

namespace opret {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

// Prefix of a payload in the requested unit, or empty string when the
// payload is too short. Hex mode treats the payload as its hex rendering,
// so one byte yields two units.
std::string prefix_of(const Bytes& payload, int units, PrefixUnit unit) {
    std::string out;
    if (unit == PrefixUnit::Byte) {
        if (payload.size() < static_cast<std::size_t>(units))
            return out;
        out.assign(payload.begin(), payload.begin() + units);
        return out;
    }
    if (payload.size() * 2 < static_cast<std::size_t>(units))
        return out;
    out.reserve(static_cast<std::size_t>(units));
    for (int i = 0; i < units; ++i) {
        std::uint8_t byte = payload[static_cast<std::size_t>(i) / 2];
        out.push_back(i % 2 == 0 ? kHexDigits[byte >> 4] : kHexDigits[byte & 0x0f]);
    }
    return out;
}

using Tally = std::unordered_map<std::string, std::uint64_t>;

Tally tally_prefixes(const std::vector<Bytes>& payloads, std::size_t begin, std::size_t end,
                     int units, PrefixUnit unit) {
    Tally counts;
    for (std::size_t i = begin; i < end; ++i) {
        std::string code = prefix_of(payloads[i], units, unit);
        if (!code.empty())
            ++counts[code];
    }
    return counts;
}

std::string render_code(const std::string& prefix, PrefixUnit unit) {
    if (unit == PrefixUnit::HexChar)
        return prefix;
    std::string out;
    out.reserve(prefix.size() * 2);
    for (char c : prefix) {
        auto byte = static_cast<std::uint8_t>(c);
        out.push_back(kHexDigits[byte >> 4]);
        out.push_back(kHexDigits[byte & 0x0f]);
    }
    return out;
}

} // namespace

std::vector<CandidateIdentifier> detect_identifiers(const std::vector<Bytes>& payloads,
                                                    const DiscoveryParams& params,
                                                    unsigned thread_count) {
    std::vector<CandidateIdentifier> candidates;
    if (payloads.empty() || params.max_prefix_units < 1)
        return candidates;

    const double alphabet = params.prefix_unit == PrefixUnit::HexChar ? 16.0 : 256.0;
    const auto total = static_cast<double>(payloads.size());

    for (int units = 1; units <= params.max_prefix_units; ++units) {
        Tally counts;
        if (thread_count <= 1 || payloads.size() < 2 * thread_count) {
            counts = tally_prefixes(payloads, 0, payloads.size(), units, params.prefix_unit);
        } else {
            // Commutative-monoid reduction over shards: merged counts are
            // independent of shard boundaries.
            std::size_t shard = (payloads.size() + thread_count - 1) / thread_count;
            std::vector<std::future<Tally>> parts;
            for (std::size_t begin = 0; begin < payloads.size(); begin += shard) {
                std::size_t end = std::min(begin + shard, payloads.size());
                parts.push_back(std::async(std::launch::async, tally_prefixes,
                                           std::cref(payloads), begin, end, units,
                                           params.prefix_unit));
            }
            for (auto& part : parts)
                for (auto& [code, n] : part.get())
                    counts[code] += n;
        }

        // Division by a power of 16 or 256 is exact in binary floating
        // point, so the threshold comparison is reproducible.
        const double expected = total / std::pow(alphabet, units);
        for (const auto& [code, occurrences] : counts) {
            if (static_cast<double>(occurrences) > expected * params.ratio_threshold &&
                occurrences > params.absolute_threshold) {
                candidates.push_back({render_code(code, params.prefix_unit), units, occurrences,
                                      expected});
            }
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const CandidateIdentifier& a, const CandidateIdentifier& b) {
                  return a.length != b.length ? a.length < b.length : a.code < b.code;
              });
    return candidates;
}

void write_candidate_report(std::ostream& out,
                            const std::vector<CandidateIdentifier>& candidates) {
    out << "code\tlength\toccurrences\texpected\tratio\n";
    char line[160];
    for (const CandidateIdentifier& c : candidates) {
        std::snprintf(line, sizeof(line), "%s\t%d\t%llu\t%.6g\t%.6g\n", c.code.c_str(), c.length,
                      static_cast<unsigned long long>(c.occurrences), c.expected_occurrences,
                      c.ratio());
        out << line;
    }
}

} // namespace opret
