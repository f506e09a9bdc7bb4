#include "spotsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spotsim/errors.hpp"
#include "spotsim/numformat.hpp"

namespace spotsim {

namespace {

// Splits one line into RFC-4180 fields: quoted fields may contain commas
// and doubled quotes. Returns false on unbalanced quoting.
bool split_csv_line(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool in_quotes = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty()) return false;  // quote opening mid-field
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
        ++i;
    }
    if (in_quotes) return false;
    fields.push_back(std::move(cur));
    return true;
}

void split_tsv_line(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool parse_price(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

bool needs_quoting(const std::string& field) {
    return field.find_first_of(",\"\n") != std::string::npos;
}

void append_csv_field(std::string& out, const std::string& field) {
    if (!needs_quoting(field)) {
        out += field;
        return;
    }
    out += '"';
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

class RowSink {
public:
    RowSink(const std::string& source, bool lenient) : source_(source), lenient_(lenient) {}

    void bad_row(std::size_t line_no, const std::string& reason) {
        if (!lenient_) {
            throw ParseError(source_ + ":" + std::to_string(line_no) + ": " + reason);
        }
        std::cerr << source_ << ":" << line_no << ": " << reason << " (row skipped)\n";
    }

    void good_row(PriceRecord&& rec) { records.push_back(std::move(rec)); }

    std::vector<PriceRecord> records;

private:
    const std::string& source_;
    bool lenient_;
};

void parse_csv_rows(std::string_view text, RowSink& sink, const std::string& source) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t header_cols = 0;
    std::vector<std::string> fields;
    static const char* kHeaderCols[] = {"timestamp", "price", "instance_type", "os", "zone"};

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;

        if (!header_seen) {
            if (!split_csv_line(sv, fields)) {
                throw ParseError(source + ":" + std::to_string(line_no) + ": unbalanced quotes in header");
            }
            if (fields.size() < 2 || fields.size() > 5) {
                throw ParseError(source + ": expected CSV header timestamp,price[,instance_type,os,zone]");
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] != kHeaderCols[i]) {
                    throw ParseError(source + ": expected CSV header timestamp,price[,instance_type,os,zone]");
                }
            }
            header_cols = fields.size();
            header_seen = true;
            continue;
        }

        if (!split_csv_line(sv, fields)) {
            sink.bad_row(line_no, "unbalanced quotes");
            continue;
        }
        if (fields.size() < 2 || fields.size() > header_cols) {
            sink.bad_row(line_no, "expected 2.." + std::to_string(header_cols) + " fields, got " +
                                      std::to_string(fields.size()));
            continue;
        }

        const auto ts = Timestamp::parse(fields[0]);
        if (!ts) {
            sink.bad_row(line_no, "malformed timestamp '" + fields[0] + "'");
            continue;
        }
        double price = 0.0;
        if (!parse_price(fields[1], price)) {
            sink.bad_row(line_no, "non-numeric price '" + fields[1] + "'");
            continue;
        }
        if (price <= 0.0) {
            sink.bad_row(line_no, "non-positive price '" + fields[1] + "'");
            continue;
        }

        PriceRecord rec;
        rec.timestamp = *ts;
        rec.price_original = price;
        if (fields.size() > 2) rec.instance_type = fields[2];
        if (fields.size() > 3) rec.os = fields[3];
        if (fields.size() > 4) rec.zone = fields[4];
        sink.good_row(std::move(rec));
    }

    if (!header_seen) {
        throw ParseError(source + ": zero parseable rows (no CSV header found)");
    }
}

void parse_tsv_rows(std::string_view text, RowSink& sink) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> fields;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;

        split_tsv_line(sv, fields);
        if (fields.size() != 6 || fields[0] != "SPOTINSTANCEPRICE") {
            sink.bad_row(line_no, "expected 6 tab-separated fields led by SPOTINSTANCEPRICE");
            continue;
        }
        double price = 0.0;
        if (!parse_price(fields[1], price)) {
            sink.bad_row(line_no, "non-numeric price '" + fields[1] + "'");
            continue;
        }
        if (price <= 0.0) {
            sink.bad_row(line_no, "non-positive price '" + fields[1] + "'");
            continue;
        }
        const auto ts = Timestamp::parse(fields[2]);
        if (!ts) {
            sink.bad_row(line_no, "malformed timestamp '" + fields[2] + "'");
            continue;
        }

        PriceRecord rec;
        rec.timestamp = *ts;
        rec.price_original = price;
        rec.instance_type = fields[3];
        rec.os = fields[4];
        rec.zone = fields[5];
        sink.good_row(std::move(rec));
    }
}

TraceFormat detect_format(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = strip_cr(text.substr(pos, eol - pos));
        if (!line.empty()) {
            return line.starts_with("SPOTINSTANCEPRICE") ? TraceFormat::Ec2Tsv : TraceFormat::Csv;
        }
        pos = eol + 1;
    }
    return TraceFormat::Csv;
}

}  // namespace

Trace parse_trace_text(std::string_view text, const std::string& source_name,
                       const ParseOptions& opts) {
    TraceFormat format = opts.format;
    if (format == TraceFormat::Auto) format = detect_format(text);

    RowSink sink(source_name, opts.lenient);
    if (format == TraceFormat::Ec2Tsv) {
        parse_tsv_rows(text, sink);
    } else {
        parse_csv_rows(text, sink, source_name);
    }

    if (sink.records.empty()) {
        throw ParseError(source_name + ": zero parseable rows");
    }

    Trace trace;
    trace.records = std::move(sink.records);
    trace.source_path = source_name;
    std::stable_sort(trace.records.begin(), trace.records.end(),
                     [](const PriceRecord& a, const PriceRecord& b) { return a.timestamp < b.timestamp; });
    return trace;
}

Trace parse_trace(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw ParseError(path + ": read failure");
    }
    return parse_trace_text(buffer.str(), path, opts);
}

Trace filter_trace(const Trace& trace, const TraceFilter& filter) {
    const auto matches = [](const std::optional<std::string>& want, const std::string& have) {
        if (!want) return true;
        return !have.empty() && have == *want;
    };

    Trace out;
    out.source_path = trace.source_path;
    for (const PriceRecord& rec : trace.records) {
        if (matches(filter.instance_type, rec.instance_type) && matches(filter.os, rec.os) &&
            matches(filter.zone, rec.zone)) {
            out.records.push_back(rec);
        }
    }
    if (out.records.empty()) {
        throw EmptyFilterError(trace.source_path + ": no records match the supplied filters");
    }
    return out;
}

TraceStats trace_stats(const Trace& trace) {
    if (trace.records.empty()) {
        throw std::invalid_argument("trace_stats: empty trace");
    }

    TraceStats stats;
    stats.count = trace.records.size();
    stats.min_price = stats.max_price = trace.records.front().price_original;

    std::vector<double> prices;
    prices.reserve(stats.count);
    std::size_t changes = 0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const double p = trace.records[i].price_original;
        prices.push_back(p);
        stats.min_price = std::min(stats.min_price, p);
        stats.max_price = std::max(stats.max_price, p);
        if (i > 0 && p != trace.records[i - 1].price_original) ++changes;
    }
    std::sort(prices.begin(), prices.end());
    stats.distinct_prices =
        static_cast<std::size_t>(std::unique(prices.begin(), prices.end()) - prices.begin());
    stats.change_ratio =
        stats.count > 1 ? static_cast<double>(changes) / static_cast<double>(stats.count - 1) : 0.0;
    return stats;
}

OscillationVerdict check_oscillation(const TraceStats& stats, double threshold, bool strict) {
    if (stats.change_ratio < threshold) {
        return strict ? OscillationVerdict::Rejection : OscillationVerdict::Warning;
    }
    return OscillationVerdict::Ok;
}

const char* to_string(OscillationVerdict verdict) {
    switch (verdict) {
        case OscillationVerdict::Ok: return "ok";
        case OscillationVerdict::Warning: return "warning";
        case OscillationVerdict::Rejection: return "rejection";
    }
    return "unknown";
}

std::string to_csv(const Trace& trace) {
    std::string out = "timestamp,price,instance_type,os,zone\n";
    for (const PriceRecord& rec : trace.records) {
        out += rec.timestamp.to_iso8601();
        out += ',';
        out += format_roundtrip(rec.price_original);
        out += ',';
        append_csv_field(out, rec.instance_type);
        out += ',';
        append_csv_field(out, rec.os);
        out += ',';
        append_csv_field(out, rec.zone);
        out += '\n';
    }
    return out;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << to_csv(trace);
    if (!out) {
        throw std::runtime_error(path + ": write failure");
    }
}

}  // namespace spotsim
