#include "spotsim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "spotsim/numformat.hpp"

namespace spotsim {

std::string series_csv(const SimSeries& series) {
    std::string out = "step,timestamp,price_original,price_transformed,demand,resource\n";
    for (const SimState& state : series.states) {
        out += std::to_string(state.step);
        out += ',';
        if (state.timestamp) out += state.timestamp->to_iso8601();
        out += ',';
        if (state.price_original) out += format_sig6(*state.price_original);
        out += ',';
        if (state.price) out += format_sig6(*state.price);
        out += ',';
        out += format_sig6(state.demand);
        out += ',';
        out += format_sig6(state.resource);
        out += '\n';
    }
    return out;
}

std::size_t write_series_csv(const SimSeries& series, const std::string& path) {
    if (series.states.empty()) {
        throw std::invalid_argument("write_series_csv: empty series");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << series_csv(series);
    if (!out) {
        throw std::runtime_error(path + ": write failure");
    }
    return series.states.size();
}

namespace {

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Panel {
    double x, y, w, h;
    double lo, hi;  // value range mapped onto [y+h, y]

    double map_x(double step, double max_step) const {
        return max_step > 0.0 ? x + (step / max_step) * w : x + w / 2.0;
    }
    double map_y(double v) const { return y + h - (v - lo) / (hi - lo) * h; }
};

void pad_range(double& lo, double& hi) {
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void panel_frame(std::string& svg, const Panel& p) {
    svg += "<rect x=\"" + px(p.x) + "\" y=\"" + px(p.y) + "\" width=\"" + px(p.w) +
           "\" height=\"" + px(p.h) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + px(p.x - 6) + "\" y=\"" + px(p.y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_sig6(p.hi) + "</text>\n";
    svg += "<text x=\"" + px(p.x - 6) + "\" y=\"" + px(p.y + p.h + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_sig6(p.lo) + "</text>\n";
}

void polyline(std::string& svg, const std::vector<std::pair<double, double>>& pts,
              const char* color) {
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) svg += ' ';
        svg += px(pts[i].first) + "," + px(pts[i].second);
    }
    svg += "\"/>\n";
}

constexpr const char* kPriceColor = "#555555";
constexpr const char* kDemandColor = "#c0392b";
constexpr const char* kResourceColor = "#27ae60";

}  // namespace

std::string render_svg_string(const SimSeries& series, const ChartSpec& spec) {
    if (series.states.size() < 2) {
        throw std::invalid_argument("render_svg: series needs at least 2 states");
    }
    if (spec.width < 100 || spec.height < 100) {
        throw std::invalid_argument("render_svg: chart must be at least 100x100");
    }
    if (!spec.show_price && !spec.show_demand && !spec.show_resource) {
        throw std::invalid_argument("render_svg: no series selected");
    }

    const double W = spec.width;
    const double H = spec.height;
    const double left = 64.0, right = 16.0, top = 40.0, bottom = 28.0, gap = 20.0;
    const double plot_w = W - left - right;
    const double max_step = static_cast<double>(series.states.size() - 1);

    const bool series_panel_on = spec.show_demand || spec.show_resource;
    const double plot_h = H - top - bottom - (spec.show_price && series_panel_on ? gap : 0.0);
    const double price_h = !spec.show_price ? 0.0 : (series_panel_on ? plot_h * 0.35 : plot_h);
    const double main_h = plot_h - price_h;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
    if (!spec.title.empty()) {
        svg += "<text x=\"" + px(W / 2.0) + "\" y=\"18\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"14\">" +
               xml_escape(spec.title) + "</text>\n";
    }

    // Legend swatches along the top edge.
    {
        double lx = left;
        const double ly = top - 10.0;
        const auto swatch = [&](const char* color, const char* label) {
            svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 18) +
                   "\" y2=\"" + px(ly) + "\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"2\"/>\n";
            svg += "<text x=\"" + px(lx + 22) + "\" y=\"" + px(ly + 4) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">";
            svg += label;
            svg += "</text>\n";
            lx += 100.0;
        };
        if (spec.show_price) swatch(kPriceColor, "price");
        if (spec.show_demand) swatch(kDemandColor, "demand");
        if (spec.show_resource) swatch(kResourceColor, "resource");
    }

    double axis_bottom = 0.0;

    if (spec.show_price) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const SimState& s : series.states) {
            if (!s.price) continue;
            lo = first ? *s.price : std::min(lo, *s.price);
            hi = first ? *s.price : std::max(hi, *s.price);
            first = false;
        }
        pad_range(lo, hi);
        Panel panel{left, top, plot_w, price_h, lo, hi};
        panel_frame(svg, panel);
        std::vector<std::pair<double, double>> pts;
        for (const SimState& s : series.states) {
            if (!s.price) continue;
            pts.emplace_back(panel.map_x(static_cast<double>(s.step), max_step),
                             panel.map_y(*s.price));
        }
        polyline(svg, pts, kPriceColor);
        axis_bottom = panel.y + panel.h;
    }

    if (series_panel_on) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const SimState& s : series.states) {
            if (spec.show_demand) {
                lo = first ? s.demand : std::min(lo, s.demand);
                hi = first ? s.demand : std::max(hi, s.demand);
                first = false;
            }
            if (spec.show_resource) {
                lo = first ? s.resource : std::min(lo, s.resource);
                hi = first ? s.resource : std::max(hi, s.resource);
                first = false;
            }
        }
        pad_range(lo, hi);
        const double y0 = spec.show_price ? top + price_h + gap : top;
        Panel panel{left, y0, plot_w, main_h > 0.0 ? main_h : plot_h, lo, hi};
        panel_frame(svg, panel);
        if (spec.show_demand) {
            std::vector<std::pair<double, double>> pts;
            for (const SimState& s : series.states) {
                pts.emplace_back(panel.map_x(static_cast<double>(s.step), max_step),
                                 panel.map_y(s.demand));
            }
            polyline(svg, pts, kDemandColor);
        }
        if (spec.show_resource) {
            std::vector<std::pair<double, double>> pts;
            for (const SimState& s : series.states) {
                pts.emplace_back(panel.map_x(static_cast<double>(s.step), max_step),
                                 panel.map_y(s.resource));
            }
            polyline(svg, pts, kResourceColor);
        }
        axis_bottom = panel.y + panel.h;
    }

    // X axis labels: first and last step index.
    svg += "<text x=\"" + px(left) + "\" y=\"" + px(axis_bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
    svg += "<text x=\"" + px(left + plot_w) + "\" y=\"" + px(axis_bottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           std::to_string(series.states.size() - 1) + "</text>\n";

    svg += "</svg>\n";
    return svg;
}

void render_svg(const SimSeries& series, const ChartSpec& spec, const std::string& path) {
    const std::string svg = render_svg_string(series, spec);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << svg;
    if (!out) {
        throw std::runtime_error(path + ": write failure");
    }
}

}  // namespace spotsim
