#pragma once

#include <cstddef>
#include <string>

#include "spotsim/engine.hpp"

namespace spotsim {

struct ChartSpec {
    int width = 900;   // pixels, >= 100
    int height = 540;  // pixels, >= 100
    bool show_price = true;
    bool show_demand = true;
    bool show_resource = true;
    std::string title;
};

// CSV schema: step,timestamp,price_original,price_transformed,demand,resource.
// The seed row has empty timestamp/price cells. Numbers carry 6
// significant digits. Returns rows written, header excluded.
std::string series_csv(const SimSeries& series);
std::size_t write_series_csv(const SimSeries& series, const std::string& path);

// Self-contained SVG 1.1 line chart, price panel above the
// demand/resource panel, byte-deterministic for identical inputs.
std::string render_svg_string(const SimSeries& series, const ChartSpec& spec);
void render_svg(const SimSeries& series, const ChartSpec& spec, const std::string& path);

}  // namespace spotsim
