#include "opret/stats.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <set>
#include <unordered_map>

namespace opret {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::int64_t record_timestamp(const ClassifiedRecord& r) {
    if (r.record.block_timestamp <= 0)
        throw MissingTimestampError("record " + to_display_hex(r.record.txid) +
                                    " carries no block timestamp");
    return r.record.block_timestamp;
}

struct Partial {
    Category category = Category::Unknown;
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;
    std::optional<std::int64_t> first_ts;

    void add(std::int64_t ts, std::uint64_t metadata_bytes) {
        ++count;
        bytes += metadata_bytes;
        if (!first_ts || ts < *first_ts)
            first_ts = ts;
    }

    void merge(const Partial& other) {
        count += other.count;
        bytes += other.bytes;
        if (other.first_ts && (!first_ts || *other.first_ts < *first_ts))
            first_ts = other.first_ts;
    }
};

using LabelTally = std::unordered_map<std::string, Partial>;

LabelTally tally_labels(const std::vector<ClassifiedRecord>& records, std::size_t begin,
                        std::size_t end) {
    LabelTally tally;
    for (std::size_t i = begin; i < end; ++i) {
        const ClassifiedRecord& r = records[i];
        Partial& p = tally[r.label];
        p.category = r.category;
        p.add(r.record.block_timestamp, r.record.metadata.size());
    }
    return tally;
}

int category_rank(Category c) {
    return static_cast<int>(c);
}

std::string format_count(std::uint64_t n) {
    std::string digits = std::to_string(n);
    std::string out;
    int next_break = static_cast<int>(digits.size()) % 3;
    if (next_break == 0)
        next_break = 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0 && static_cast<int>(i) == next_break) {
            out.push_back(',');
            next_break += 3;
        }
        out.push_back(digits[i]);
    }
    return out;
}

std::string render_identifier(const Bytes& id) {
    bool printable = std::all_of(id.begin(), id.end(),
                                 [](std::uint8_t b) { return b >= 0x20 && b <= 0x7e; });
    if (printable)
        return std::string(id.begin(), id.end());
    return "0x" + to_hex(ByteSpan(id.data(), id.size()));
}

} // namespace

std::string render_average(std::uint64_t total_bytes, std::uint64_t count) {
    if (count == 0)
        return "0";
    // Half-away-from-zero on the exact rational: floor((20*total + count) / (2*count)).
    std::uint64_t scaled = (20 * total_bytes + count) / (2 * count);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ".%" PRIu64, scaled / 10, scaled % 10);
    return buf;
}

AggregateReport aggregate(const std::vector<ClassifiedRecord>& records, unsigned thread_count) {
    LabelTally tally;
    if (thread_count <= 1 || records.size() < 2 * thread_count) {
        tally = tally_labels(records, 0, records.size());
    } else {
        std::size_t shard = (records.size() + thread_count - 1) / thread_count;
        std::vector<std::future<LabelTally>> parts;
        for (std::size_t begin = 0; begin < records.size(); begin += shard) {
            std::size_t end = std::min(begin + shard, records.size());
            parts.push_back(
                std::async(std::launch::async, tally_labels, std::cref(records), begin, end));
        }
        for (auto& part : parts) {
            for (auto& [label, partial] : part.get()) {
                Partial& merged = tally[label];
                merged.category = partial.category;
                merged.merge(partial);
            }
        }
    }

    AggregateReport report;
    report.total.label = "TOTAL";

    std::map<Category, Partial> by_category;
    std::vector<ProtocolStats> rows;
    rows.reserve(tally.size());
    for (auto& [label, partial] : tally) {
        Partial& cat = by_category[partial.category];
        cat.category = partial.category;
        cat.merge(partial);
        if (partial.category != Category::Empty && partial.category != Category::Unknown)
            rows.push_back({label, partial.category, partial.count, partial.bytes,
                            partial.first_ts});
        report.total.tx_count += partial.count;
        report.total.total_metadata_bytes += partial.bytes;
        if (partial.first_ts &&
            (!report.total.first_timestamp || *partial.first_ts < *report.total.first_timestamp))
            report.total.first_timestamp = partial.first_ts;
    }

    std::sort(rows.begin(), rows.end(), [](const ProtocolStats& a, const ProtocolStats& b) {
        if (a.category != b.category)
            return category_rank(a.category) < category_rank(b.category);
        return a.label < b.label;
    });
    report.protocols = std::move(rows);

    for (auto& [category, partial] : by_category)
        report.categories.push_back({std::string(category_name(category)), category,
                                     partial.count, partial.bytes, partial.first_ts});
    return report;
}

TimeSeries weekly_series(const std::vector<ClassifiedRecord>& records, SeriesGrouping grouping,
                         std::int64_t anchor, int bucket_days) {
    TimeSeries series;
    series.anchor = anchor;
    series.bucket_seconds = static_cast<std::int64_t>(bucket_days) * 86400;
    if (records.empty())
        return series;

    std::map<std::int64_t, std::map<std::string, std::uint64_t>> buckets;
    for (const ClassifiedRecord& r : records) {
        std::int64_t ts = record_timestamp(r);
        std::int64_t index = floor_div(ts - anchor, series.bucket_seconds);
        auto& counts = buckets[index];
        switch (grouping) {
        case SeriesGrouping::Categories:
            ++counts[std::string(category_name(r.category))];
            break;
        case SeriesGrouping::Labels:
            ++counts[r.label];
            break;
        case SeriesGrouping::Peaks:
            ++counts["All"];
            if (r.category == Category::Empty)
                ++counts["Empty"];
            else if (r.category == Category::Unknown)
                ++counts["Unknown"];
            break;
        }
    }

    std::int64_t first = buckets.begin()->first;
    std::int64_t last = buckets.rbegin()->first;
    series.points.reserve(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t index = first; index <= last; ++index) {
        TimeSeriesPoint point;
        point.bucket_start = anchor + index * series.bucket_seconds;
        if (auto it = buckets.find(index); it != buckets.end())
            point.counts = std::move(it->second);
        series.points.push_back(std::move(point));
    }
    return series;
}

AvgLengthSeries avg_length_series(const std::vector<ClassifiedRecord>& records,
                                  std::int64_t anchor, int bucket_days) {
    AvgLengthSeries series;
    series.anchor = anchor;
    series.bucket_seconds = static_cast<std::int64_t>(bucket_days) * 86400;

    std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> buckets; // count, bytes
    for (const ClassifiedRecord& r : records) {
        std::int64_t ts = record_timestamp(r);
        std::int64_t index = floor_div(ts - anchor, series.bucket_seconds);
        auto& [count, bytes] = buckets[index];
        ++count;
        bytes += r.record.metadata.size();
    }

    series.points.reserve(buckets.size());
    for (const auto& [index, bucket] : buckets) {
        AvgLengthPoint point;
        point.bucket_start = anchor + index * series.bucket_seconds;
        point.tx_count = bucket.first;
        point.avg_bytes = static_cast<double>(bucket.second) / static_cast<double>(bucket.first);
        series.points.push_back(point);
    }
    return series;
}

std::uint64_t SizeHistogram::total() const {
    std::uint64_t n = 0;
    for (const auto& [length, count] : bins)
        n += count;
    return n;
}

SizeHistogram size_histogram(const std::vector<ClassifiedRecord>& records) {
    SizeHistogram histogram;
    for (const ClassifiedRecord& r : records)
        ++histogram.bins[r.record.metadata.size()];
    return histogram;
}

std::map<Category, double> category_distribution(const std::map<Category, std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (const auto& [category, count] : counts)
        total += count;
    if (total == 0)
        throw EmptyInputError("no records to distribute");
    std::map<Category, double> out;
    for (const auto& [category, count] : counts)
        out[category] = 100.0 * static_cast<double>(count) / static_cast<double>(total);
    return out;
}

std::map<Category, double> category_distribution(const std::vector<ClassifiedRecord>& records) {
    if (records.empty())
        throw EmptyInputError("no records to distribute");
    std::map<Category, std::uint64_t> counts;
    for (const ClassifiedRecord& r : records)
        ++counts[r.category];
    return category_distribution(counts);
}

double estimate_opreturn_footprint(std::uint64_t tx_count, double avg_metadata_bytes,
                                   const SpaceParams& params) {
    return static_cast<double>(tx_count) * (params.empty_tx_bytes + avg_metadata_bytes);
}

double estimate_chain_share(double footprint_bytes, double chain_total_bytes,
                            std::uint64_t block_count, const SpaceParams& params) {
    double denominator =
        chain_total_bytes - static_cast<double>(block_count) * params.per_block_overhead_bytes;
    if (denominator <= 0.0)
        throw DegenerateDenominatorError("chain size does not exceed the per-block overhead");
    return footprint_bytes / denominator;
}

namespace {

std::uint64_t count_of(const TimeSeriesPoint& point, const char* group) {
    auto it = point.counts.find(group);
    return it == point.counts.end() ? 0 : it->second;
}

} // namespace

void write_categories_csv(std::ostream& out, const TimeSeries& series) {
    out << "date,assets,notary,arts,other\n";
    char line[160];
    for (const TimeSeriesPoint& p : series.points) {
        std::snprintf(line, sizeof(line), "%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 "\n",
                      format_date(p.bucket_start).c_str(), count_of(p, "Assets"),
                      count_of(p, "Document Notary"), count_of(p, "Digital Arts"),
                      count_of(p, "Other"));
        out << line;
    }
}

void write_peaks_csv(std::ostream& out, const TimeSeries& series) {
    out << "date,empty,unknown,all\n";
    char line[160];
    for (const TimeSeriesPoint& p : series.points) {
        std::snprintf(line, sizeof(line), "%s,%" PRIu64 ",%" PRIu64 ",%" PRIu64 "\n",
                      format_date(p.bucket_start).c_str(), count_of(p, "Empty"),
                      count_of(p, "Unknown"), count_of(p, "All"));
        out << line;
    }
}

void write_length_by_time_csv(std::ostream& out, const AvgLengthSeries& series) {
    out << "date,avg_bytes\n";
    char line[80];
    for (const AvgLengthPoint& p : series.points) {
        std::snprintf(line, sizeof(line), "%s,%.2f\n", format_date(p.bucket_start).c_str(),
                      p.avg_bytes);
        out << line;
    }
}

void write_size_distribution_csv(std::ostream& out, const SizeHistogram& histogram) {
    out << "length,count\n";
    if (histogram.bins.empty())
        return;
    std::size_t max_length = histogram.bins.rbegin()->first;
    char line[64];
    for (std::size_t length = 0; length <= max_length; ++length) {
        auto it = histogram.bins.find(length);
        std::uint64_t count = it == histogram.bins.end() ? 0 : it->second;
        std::snprintf(line, sizeof(line), "%zu,%" PRIu64 "\n", length, count);
        out << line;
    }
}

void write_labels_csv(std::ostream& out, const TimeSeries& series) {
    std::set<std::string> labels;
    for (const TimeSeriesPoint& p : series.points)
        for (const auto& [label, count] : p.counts)
            labels.insert(label);

    out << "date";
    for (const std::string& label : labels)
        out << ',' << label;
    out << '\n';
    for (const TimeSeriesPoint& p : series.points) {
        out << format_date(p.bucket_start);
        for (const std::string& label : labels) {
            auto it = p.counts.find(label);
            out << ',' << (it == p.counts.end() ? 0 : it->second);
        }
        out << '\n';
    }
}

namespace {

void write_table_row(std::ostream& out, const std::string& category, const std::string& label,
                     const std::string& identifiers, const ProtocolStats& row) {
    std::string first = row.first_timestamp ? format_date(*row.first_timestamp, '/') : "-";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %-20s %-34s %-11s %14s %14s %10s\n", category.c_str(),
                  label.c_str(), identifiers.c_str(), first.c_str(),
                  format_count(row.tx_count).c_str(),
                  format_count(row.total_metadata_bytes).c_str(),
                  render_average(row.total_metadata_bytes, row.tx_count).c_str());
    out << buf;
}

} // namespace

void write_protocol_table(std::ostream& out, const AggregateReport& report,
                          const ProtocolRegistry* registry) {
    char header[256];
    std::snprintf(header, sizeof(header), "%-16s %-20s %-34s %-11s %14s %14s %10s\n", "Category",
                  "Protocol", "Identifiers", "First", "Transactions", "Bytes", "Avg");
    out << header;

    for (const ProtocolStats& row : report.protocols) {
        std::string identifiers = "-";
        if (registry) {
            for (const ProtocolEntry& entry : registry->entries()) {
                if (entry.name != row.label)
                    continue;
                identifiers.clear();
                for (std::size_t i = 0; i < entry.identifiers.size(); ++i) {
                    if (i > 0)
                        identifiers += ", ";
                    identifiers += render_identifier(entry.identifiers[i]);
                }
                break;
            }
        }
        write_table_row(out, std::string(category_name(row.category)), row.label, identifiers,
                        row);
    }
    for (const ProtocolStats& row : report.categories)
        write_table_row(out, row.label, "Total", "-", row);
    write_table_row(out, "TOTAL", "-", "-", report.total);
}

} // namespace opret
