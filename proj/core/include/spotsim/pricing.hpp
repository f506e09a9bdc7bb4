#pragma once

#include <vector>

#include "spotsim/trace.hpp"

namespace spotsim {

// The static on-demand price of the instance type, used as the
// normalization denominator for spot prices.
struct FixedPrice {
    explicit FixedPrice(double v);
    double value;
};

// Normalizes a spot price to a fraction of the fixed price, clamped to
// [0, 1]: min(price_original / fixed, 1). Prices at or above the fixed
// price signal pure discouragement and map to exactly 1.
double transform_price(double price_original, FixedPrice fixed);

// Element-wise transform_price over a trace, order-preserving.
std::vector<double> transform_trace(const Trace& trace, FixedPrice fixed);

}  // namespace spotsim
