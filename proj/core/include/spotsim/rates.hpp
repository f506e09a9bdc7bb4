#pragma once

#include <string>
#include <vector>

namespace spotsim {

// Shape parameters of the birth-rate functions
//   f(p) = k * (1 - p^a)^(1/b)        demand born per unit time
//   g(p) = k * (1 - (1 - p^a)^(1/b))  resource released per unit time
// k caps the per-step birth amount; larger a and b sharpen the knee near
// p = 1 where consumers lose any financial incentive.
struct RateParams {
    RateParams() = default;
    RateParams(double k, double a, double b);

    double k = 5.0;
    double a = 3.0;
    double b = 3.0;
};

double demand_birth_rate(double p, const RateParams& params);
double resource_birth_rate(double p, const RateParams& params);

struct RateCurveRow {
    double p;
    double demand_rate;
    double resource_rate;
};

// Uniform grid over [0, 1] inclusive of both endpoints; samples >= 2.
std::vector<RateCurveRow> dump_rate_curves(const RateParams& params, int samples);

// CSV with header "p,demand_rate,resource_rate".
std::string rate_curves_csv(const std::vector<RateCurveRow>& rows);

}  // namespace spotsim
