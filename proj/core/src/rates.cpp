#include "spotsim/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "spotsim/numformat.hpp"

namespace spotsim {

namespace {

void require_unit_interval(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("transformed price outside [0, 1]");
    }
}

// (1 - p^a)^(1/b) via exp(ln(.)/b); exact early returns at the endpoints
// keep the boundary identities free of log(0).
double root_term(double p, const RateParams& params) {
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    const double u = 1.0 - std::pow(p, params.a);
    if (u <= 0.0) return 0.0;
    return std::exp(std::log(u) / params.b);
}

}  // namespace

RateParams::RateParams(double k_, double a_, double b_) : k(k_), a(a_), b(b_) {
    if (!(k > 0.0)) throw std::invalid_argument("rate parameter k must be > 0");
    if (!(a > 1.0)) throw std::invalid_argument("rate parameter a must be > 1");
    if (!(b > 1.0)) throw std::invalid_argument("rate parameter b must be > 1");
}

double demand_birth_rate(double p, const RateParams& params) {
    require_unit_interval(p);
    return params.k * root_term(p, params);
}

double resource_birth_rate(double p, const RateParams& params) {
    require_unit_interval(p);
    return params.k * (1.0 - root_term(p, params));
}

std::vector<RateCurveRow> dump_rate_curves(const RateParams& params, int samples) {
    if (samples < 2) {
        throw std::invalid_argument("rate curve needs at least 2 samples");
    }
    std::vector<RateCurveRow> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(samples - 1);
        rows.push_back({p, demand_birth_rate(p, params), resource_birth_rate(p, params)});
    }
    return rows;
}

std::string rate_curves_csv(const std::vector<RateCurveRow>& rows) {
    std::string out = "p,demand_rate,resource_rate\n";
    for (const RateCurveRow& row : rows) {
        out += format_roundtrip(row.p);
        out += ',';
        out += format_roundtrip(row.demand_rate);
        out += ',';
        out += format_roundtrip(row.resource_rate);
        out += '\n';
    }
    return out;
}

}  // namespace spotsim
