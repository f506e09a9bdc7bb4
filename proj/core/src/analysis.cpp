#include "spotsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spotsim/numformat.hpp"

namespace spotsim {

double critical_price(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) {
        throw std::invalid_argument("critical_price: exponents must be positive");
    }
    return std::pow(1.0 - std::pow(2.0, -b), 1.0 / a);
}

double critical_price(const RateParams& params) { return critical_price(params.a, params.b); }

FixedPointPrediction fixed_point(double p, const SimParams& params) {
    const double f = demand_birth_rate(p, params.rates);
    const double g = resource_birth_rate(p, params.rates);
    FixedPointPrediction out;
    out.p = p;
    out.demand_star = f / params.alpha;
    if (g < f) {
        out.resource_star = g / params.beta;
    }
    return out;
}

std::vector<DropEvent> detect_drops(const SimSeries& series, double threshold) {
    if (series.states.size() < 2) {
        throw std::invalid_argument("detect_drops: series needs at least 2 states");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("detect_drops: threshold must lie in (0, 1)");
    }

    std::vector<DropEvent> drops;
    for (std::size_t i = 1; i < series.states.size(); ++i) {
        const double before = series.states[i - 1].resource;
        const double after = series.states[i].resource;
        const double rel = 1.0 - after / before;
        if (rel >= threshold) {
            drops.push_back({series.states[i].step, rel, before, after});
        }
    }
    return drops;
}

SegmentStats segment_stats(const SimSeries& series, double price_split) {
    if (series.states.empty()) {
        throw std::invalid_argument("segment_stats: empty series");
    }
    if (!(price_split > 0.0 && price_split < 1.0)) {
        throw std::invalid_argument("segment_stats: split price must lie in (0, 1)");
    }

    SegmentStats out;
    out.split_price = price_split;
    double high_d = 0.0, high_r = 0.0, low_d = 0.0, low_r = 0.0;
    for (const SimState& state : series.states) {
        if (!state.price) continue;  // seed state
        if (*state.price >= price_split) {
            ++out.high_count;
            high_d += state.demand;
            high_r += state.resource;
        } else {
            ++out.low_count;
            low_d += state.demand;
            low_r += state.resource;
        }
    }
    if (out.high_count > 0) {
        out.high_mean_demand = high_d / static_cast<double>(out.high_count);
        out.high_mean_resource = high_r / static_cast<double>(out.high_count);
    }
    if (out.low_count > 0) {
        out.low_mean_demand = low_d / static_cast<double>(out.low_count);
        out.low_mean_resource = low_r / static_cast<double>(out.low_count);
    }
    return out;
}

AnalysisReport analyze(const SimSeries& series, double drop_threshold, double price_split) {
    AnalysisReport report;

    std::vector<double> prices;
    for (const SimState& state : series.states) {
        if (state.price) prices.push_back(*state.price);
    }
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
    report.fixed_points.reserve(prices.size());
    for (const double p : prices) {
        report.fixed_points.push_back(fixed_point(p, series.params));
    }

    report.critical_price = critical_price(series.params.rates);
    report.drops = detect_drops(series, drop_threshold);
    report.segments = segment_stats(series, price_split);
    return report;
}

namespace {

nlohmann::ordered_json segment_json(std::size_t count, const std::optional<double>& mean_demand,
                                    const std::optional<double>& mean_resource) {
    nlohmann::ordered_json seg;
    seg["count"] = count;
    if (mean_demand) {
        seg["mean_demand"] = *mean_demand;
        seg["mean_resource"] = *mean_resource;
    } else {
        seg["mean_demand"] = nullptr;
        seg["mean_resource"] = nullptr;
    }
    return seg;
}

}  // namespace

std::string to_json(const AnalysisReport& report) {
    nlohmann::ordered_json root;

    auto& fps = root["fixed_points"] = nlohmann::ordered_json::array();
    for (const FixedPointPrediction& fp : report.fixed_points) {
        nlohmann::ordered_json item;
        item["p"] = fp.p;
        item["demand_star"] = fp.demand_star;
        if (fp.resource_star) {
            item["resource_star"] = *fp.resource_star;
        } else {
            item["resource_star"] = "unbounded";
        }
        fps.push_back(std::move(item));
    }

    root["critical_price"] = report.critical_price;

    auto& drops = root["drops"] = nlohmann::ordered_json::array();
    for (const DropEvent& drop : report.drops) {
        nlohmann::ordered_json item;
        item["step"] = drop.step;
        item["relative_drop"] = drop.relative_drop;
        item["resource_before"] = drop.resource_before;
        item["resource_after"] = drop.resource_after;
        drops.push_back(std::move(item));
    }

    auto& seg = root["segment_stats"];
    seg["split_price"] = report.segments.split_price;
    seg["high"] = segment_json(report.segments.high_count, report.segments.high_mean_demand,
                               report.segments.high_mean_resource);
    seg["low"] = segment_json(report.segments.low_count, report.segments.low_mean_demand,
                              report.segments.low_mean_resource);

    return root.dump(2) + "\n";
}

std::string to_text(const AnalysisReport& report) {
    std::ostringstream out;
    out << "critical price: " << format_sig6(report.critical_price) << "\n";
    out << "fixed points (per distinct price):\n";
    for (const FixedPointPrediction& fp : report.fixed_points) {
        out << "  p=" << format_sig6(fp.p) << "  D*=" << format_sig6(fp.demand_star) << "  R*=";
        if (fp.resource_star) {
            out << format_sig6(*fp.resource_star);
        } else {
            out << "unbounded";
        }
        out << "\n";
    }
    out << "sharp resource drops: " << report.drops.size() << "\n";
    for (const DropEvent& drop : report.drops) {
        out << "  step " << drop.step << ": " << format_sig6(drop.resource_before) << " -> "
            << format_sig6(drop.resource_after) << " (-" << format_sig6(100.0 * drop.relative_drop)
            << "%)\n";
    }
    const SegmentStats& seg = report.segments;
    out << "segments (split at p=" << format_sig6(seg.split_price) << "):\n";
    out << "  high-price states: " << seg.high_count;
    if (seg.high_mean_demand) {
        out << "  mean D=" << format_sig6(*seg.high_mean_demand)
            << "  mean R=" << format_sig6(*seg.high_mean_resource);
    }
    out << "\n  low-price states:  " << seg.low_count;
    if (seg.low_mean_demand) {
        out << "  mean D=" << format_sig6(*seg.low_mean_demand)
            << "  mean R=" << format_sig6(*seg.low_mean_resource);
    }
    out << "\n";
    return out.str();
}

}  // namespace spotsim
