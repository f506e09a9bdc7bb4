#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spotsim/timestamp.hpp"

namespace spotsim {

// One timestamped spot-price observation. The three labels are optional
// and empty when the source format does not carry them.
struct PriceRecord {
    Timestamp timestamp;
    double price_original = 0.0;  // USD per instance-hour, > 0
    std::string instance_type;
    std::string os;
    std::string zone;

    friend bool operator==(const PriceRecord&, const PriceRecord&) = default;
};

// Price history loaded from disk, sorted ascending by timestamp.
struct Trace {
    std::vector<PriceRecord> records;
    std::string source_path;
};

enum class TraceFormat { Auto, Csv, Ec2Tsv };

struct ParseOptions {
    TraceFormat format = TraceFormat::Auto;
    // Lenient mode skips unparseable rows with a per-row stderr
    // diagnostic; the default treats the first bad row as fatal.
    bool lenient = false;
};

// Accepted formats:
//   csv      header "timestamp,price[,instance_type,os,zone]", RFC-4180 quoting
//   ec2-tsv  headerless "SPOTINSTANCEPRICE<TAB>price<TAB>timestamp<TAB>type<TAB>product<TAB>zone"
// Auto-detection looks at the first non-empty line. Records come back
// sorted ascending by timestamp no matter the file order (the AWS tool
// emits newest-first); equal timestamps keep file order.
Trace parse_trace(const std::string& path, const ParseOptions& opts = {});

// Same parser over an in-memory buffer; source_name is used in messages.
Trace parse_trace_text(std::string_view text, const std::string& source_name,
                       const ParseOptions& opts = {});

struct TraceFilter {
    std::optional<std::string> instance_type;
    std::optional<std::string> os;
    std::optional<std::string> zone;
};

// Keeps records matching every supplied label, preserving order. Records
// with an empty label match only when no filter for that label is given.
// Throws EmptyFilterError when nothing survives.
Trace filter_trace(const Trace& trace, const TraceFilter& filter);

struct TraceStats {
    std::size_t count = 0;
    double min_price = 0.0;
    double max_price = 0.0;
    std::size_t distinct_prices = 0;
    double change_ratio = 0.0;  // fraction of consecutive pairs whose price differs
};

TraceStats trace_stats(const Trace& trace);

enum class OscillationVerdict { Ok, Warning, Rejection };

// A trace whose change_ratio falls below the threshold is too flat to
// drive demand-resource interaction: warning by default, rejection in
// strict mode.
OscillationVerdict check_oscillation(const TraceStats& stats, double threshold = 0.05,
                                     bool strict = false);

const char* to_string(OscillationVerdict verdict);

// Serializes with the full five-column header; prices are written with
// enough digits to parse back to the identical double.
std::string to_csv(const Trace& trace);
void write_trace_csv(const Trace& trace, const std::string& path);

}  // namespace spotsim
