#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spotsim/pricing.hpp"
#include "spotsim/rates.hpp"
#include "spotsim/timestamp.hpp"
#include "spotsim/trace.hpp"

namespace spotsim {

// Full model configuration. The positivity of every simulated state
// rests on 0 < alpha*dt < 1 and 0 < beta*dt < 1, enforced here.
struct SimParams {
    explicit SimParams(RateParams rates = {}, double alpha = 0.8, double beta = 0.8,
                       double dt = 1.0, double d0 = 5.0, double r0 = 5.0);

    RateParams rates;
    double alpha;  // demand death rate per unit time
    double beta;   // resource death rate per unit time
    double dt;     // step length; one price record advances one step
    double d0;     // initial demand amount
    double r0;     // initial resource amount
};

struct StepResult {
    double demand;
    double resource;
};

// One update of the demand/resource recurrence:
//   D' = D + f(p)*dt - alpha*D*dt
//   R' = R + g(p)*dt - min(alpha*D*dt, beta*R*dt)
// The min term deliberately uses the pre-update demand.
StepResult step(double demand, double resource, double p, const SimParams& params);

struct SimState {
    std::size_t step = 0;
    std::optional<Timestamp> timestamp;     // absent for the seed state
    std::optional<double> price;            // transformed price driving this step
    std::optional<double> price_original;   // untransformed price, when known
    double demand = 0.0;
    double resource = 0.0;
};

struct SimSeries {
    SimParams params;
    std::vector<SimState> states;  // trace length + 1, seed state first
};

// Iterates the recurrence over the price sequence, strictly forward and
// fully deterministic. timestamps/originals, when non-empty, must run
// parallel to prices and are copied into the corresponding states.
SimSeries simulate(std::span<const double> prices, const SimParams& params,
                   std::span<const Timestamp> timestamps = {},
                   std::span<const double> originals = {});

// The whole trace-to-series pipeline as one call: oscillation check on
// the (already filtered) trace, price transformation, then simulate.
// Throws FlatTraceError when strict mode rejects a flat trace.
SimSeries replay_pipeline(const Trace& trace, FixedPrice fixed, const SimParams& params,
                          double flat_threshold = 0.05, bool strict = false);

}  // namespace spotsim
