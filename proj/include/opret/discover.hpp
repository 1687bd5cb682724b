#pragma once

#include "opret/bytes.hpp"

#include <iosfwd>
#include <vector>

namespace opret {

// Unit the prefix tally runs over. The frequency search compares counts
// against a uniform baseline over a 16-symbol alphabet, which matches
// hex characters; the byte mode (256-symbol baseline) is the alternative
// reading and stays selectable.
enum class PrefixUnit { HexChar, Byte };

struct DiscoveryParams {
    int max_prefix_units = 12;           // D: longest prefix examined
    double ratio_threshold = 2.0;        // delta: required excess over the uniform baseline
    std::uint64_t absolute_threshold = 100; // N: required absolute count
    PrefixUnit prefix_unit = PrefixUnit::HexChar;
};

struct CandidateIdentifier {
    std::string code;   // prefix rendered as hex characters
    int length = 0;     // in prefix units
    std::uint64_t occurrences = 0;
    double expected_occurrences = 0.0;

    double ratio() const {
        return expected_occurrences > 0.0 ? static_cast<double>(occurrences) / expected_occurrences
                                          : 0.0;
    }

    bool operator==(const CandidateIdentifier&) const = default;
};

// Tallies every prefix of length 1..D over the payloads (payloads shorter
// than the prefix are skipped at that length) and returns the prefixes
// whose count exceeds both expected*delta and N, where
// expected = |payloads| / alphabet^length. Result is sorted by
// (length, code); it is the union over all lengths. thread_count > 1
// shards the tally; the outcome is identical to the sequential one.
std::vector<CandidateIdentifier> detect_identifiers(const std::vector<Bytes>& payloads,
                                                    const DiscoveryParams& params = {},
                                                    unsigned thread_count = 1);

// Tabular report: code, length, occurrences, expected, ratio.
void write_candidate_report(std::ostream& out, const std::vector<CandidateIdentifier>& candidates);

} // namespace opret
