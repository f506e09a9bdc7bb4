#include "spotsim/pricing.hpp"

#include <stdexcept>
#include <string>

namespace spotsim {

FixedPrice::FixedPrice(double v) : value(v) {
    if (!(v > 0.0)) {
        throw std::invalid_argument("fixed price must be > 0");
    }
}

double transform_price(double price_original, FixedPrice fixed) {
    if (!(price_original > 0.0)) {
        throw std::invalid_argument("spot price must be > 0");
    }
    const double p = price_original / fixed.value;
    return p < 1.0 ? p : 1.0;
}

std::vector<double> transform_trace(const Trace& trace, FixedPrice fixed) {
    if (trace.records.empty()) {
        throw std::invalid_argument("transform_trace: empty trace");
    }
    std::vector<double> out;
    out.reserve(trace.records.size());
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const double po = trace.records[i].price_original;
        if (!(po > 0.0)) {
            throw std::invalid_argument("transform_trace: non-positive price at record " +
                                        std::to_string(i));
        }
        out.push_back(transform_price(po, fixed));
    }
    return out;
}

}  // namespace spotsim
