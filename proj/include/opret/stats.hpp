#pragma once

#include "opret/classify.hpp"
#include "opret/dates.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace opret {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingTimestampError : StatsError {
    using StatsError::StatsError;
};

struct EmptyInputError : StatsError {
    using StatsError::StatsError;
};

struct DegenerateDenominatorError : StatsError {
    using StatsError::StatsError;
};

// Date of the first OP_RETURN transaction; the default bucket anchor.
inline const std::int64_t kFirstOpReturnEpoch = date_to_epoch({2014, 3, 12});

struct ProtocolStats {
    std::string label; // protocol name or Empty/Unknown sentinel
    Category category = Category::Unknown;
    std::uint64_t tx_count = 0;
    std::uint64_t total_metadata_bytes = 0;
    std::optional<std::int64_t> first_timestamp; // min block timestamp

    double average() const {
        return tx_count == 0 ? 0.0
                             : static_cast<double>(total_metadata_bytes) /
                                   static_cast<double>(tx_count);
    }
};

// Exact 1-decimal rendering of total/count, rounding half away from zero
// on the true rational so boundary rows come out reproducibly.
std::string render_average(std::uint64_t total_bytes, std::uint64_t count);

struct AggregateReport {
    std::vector<ProtocolStats> protocols;  // known protocols, category-major order
    std::vector<ProtocolStats> categories; // subtotals, only categories present
    ProtocolStats total;                   // grand total ("TOTAL")
};

// One row per protocol, per-category subtotals and a grand total.
// Metadata size counts payload bytes only. thread_count > 1 folds
// shard-wise and merges; results are identical to the sequential fold.
AggregateReport aggregate(const std::vector<ClassifiedRecord>& records,
                          unsigned thread_count = 1);

struct TimeSeriesPoint {
    std::int64_t bucket_start = 0; // epoch seconds
    std::map<std::string, std::uint64_t> counts;
};

struct TimeSeries {
    std::int64_t anchor = 0;
    std::int64_t bucket_seconds = 0;
    std::vector<TimeSeriesPoint> points; // contiguous buckets, zero-filled
};

enum class SeriesGrouping {
    Categories, // one group per category name
    Labels,     // one group per protocol/sentinel label
    Peaks,      // groups Empty, Unknown and All
};

// Fixed-width buckets (default 7 days) anchored at anchor; records fall
// into floor((timestamp - anchor) / width). Buckets before the anchor are
// legal. Throws MissingTimestampError when a record lacks a block time.
TimeSeries weekly_series(const std::vector<ClassifiedRecord>& records, SeriesGrouping grouping,
                         std::int64_t anchor = kFirstOpReturnEpoch, int bucket_days = 7);

struct AvgLengthPoint {
    std::int64_t bucket_start = 0;
    std::uint64_t tx_count = 0;
    double avg_bytes = 0.0;
};

struct AvgLengthSeries {
    std::int64_t anchor = 0;
    std::int64_t bucket_seconds = 0;
    std::vector<AvgLengthPoint> points; // empty buckets emit no point
};

AvgLengthSeries avg_length_series(const std::vector<ClassifiedRecord>& records,
                                  std::int64_t anchor = kFirstOpReturnEpoch, int bucket_days = 7);

struct SizeHistogram {
    std::map<std::size_t, std::uint64_t> bins; // payload length -> count
    std::uint64_t total() const;
};

SizeHistogram size_histogram(const std::vector<ClassifiedRecord>& records);

// Percentage of records per category; percentages sum to 100 up to
// rendering. Throws EmptyInputError on an empty corpus.
std::map<Category, double> category_distribution(const std::vector<ClassifiedRecord>& records);
std::map<Category, double> category_distribution(const std::map<Category, std::uint64_t>& counts);

struct SpaceParams {
    double empty_tx_bytes = 156.0;        // 1-in/1-out transaction with a bare OP_RETURN
    double per_block_overhead_bytes = 97.0; // per-block framing + header allowance
};

// tx_count * (empty_tx_bytes + avg_metadata_bytes).
double estimate_opreturn_footprint(std::uint64_t tx_count, double avg_metadata_bytes,
                                   const SpaceParams& params = {});

// footprint / (chain_total - block_count * per_block_overhead).
double estimate_chain_share(double footprint_bytes, double chain_total_bytes,
                            std::uint64_t block_count, const SpaceParams& params = {});

// CSV exports feeding the usage charts. Dates are YYYY-MM-DD.
void write_categories_csv(std::ostream& out, const TimeSeries& series);
void write_peaks_csv(std::ostream& out, const TimeSeries& series);
void write_length_by_time_csv(std::ostream& out, const AvgLengthSeries& series);
void write_size_distribution_csv(std::ostream& out, const SizeHistogram& histogram);

// One column per label, alphabetical; the per-protocol weekly export.
void write_labels_csv(std::ostream& out, const TimeSeries& series);

// Table of per-protocol rows, category subtotals and the grand total.
// When a registry is supplied the identifier column is populated.
void write_protocol_table(std::ostream& out, const AggregateReport& report,
                          const ProtocolRegistry* registry = nullptr);

} // namespace opret
