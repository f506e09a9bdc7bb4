#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spotsim/engine.hpp"
#include "spotsim/rates.hpp"

namespace spotsim {

// Equilibrium of the recurrence under a constant price p:
//   D* = f(p)/alpha  always;
//   R* = g(p)/beta   when g(p) < f(p), otherwise the resource grows
//        without bound and resource_star is absent.
struct FixedPointPrediction {
    double p = 0.0;
    double demand_star = 0.0;
    std::optional<double> resource_star;  // nullopt marks divergence
};

// The price where f(p) = g(p): below it resource drains toward its
// equilibrium, above it resource accumulates without bound. Closed form
// (1 - 2^-b)^(1/a).
double critical_price(double a, double b);
double critical_price(const RateParams& params);

FixedPointPrediction fixed_point(double p, const SimParams& params);

// A consecutive resource decrease of at least the configured fraction;
// candidate footprint of collective bidding at low prices.
struct DropEvent {
    std::size_t step = 0;
    double relative_drop = 0.0;  // 1 - resource_after/resource_before
    double resource_before = 0.0;
    double resource_after = 0.0;
};

std::vector<DropEvent> detect_drops(const SimSeries& series, double threshold = 0.5);

// Mean demand/resource split by driving price: states at or above the
// split price form the high segment, the rest the low segment. The seed
// state carries no price and belongs to neither.
struct SegmentStats {
    double split_price = 0.5;
    std::size_t high_count = 0;
    std::size_t low_count = 0;
    std::optional<double> high_mean_demand;
    std::optional<double> high_mean_resource;
    std::optional<double> low_mean_demand;
    std::optional<double> low_mean_resource;
};

SegmentStats segment_stats(const SimSeries& series, double price_split = 0.5);

struct AnalysisReport {
    std::vector<FixedPointPrediction> fixed_points;  // one per distinct price, ascending
    double critical_price = 0.0;
    std::vector<DropEvent> drops;
    SegmentStats segments;
};

AnalysisReport analyze(const SimSeries& series, double drop_threshold = 0.5,
                       double price_split = 0.5);

// JSON with keys fixed_points, critical_price, drops, segment_stats.
// Unbounded fixed points serialize resource_star as "unbounded".
std::string to_json(const AnalysisReport& report);

std::string to_text(const AnalysisReport& report);

}  // namespace spotsim
