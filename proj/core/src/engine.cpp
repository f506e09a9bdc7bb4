#include "spotsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "spotsim/errors.hpp"

namespace spotsim {

SimParams::SimParams(RateParams rates_, double alpha_, double beta_, double dt_, double d0_,
                     double r0_)
    : rates(rates_), alpha(alpha_), beta(beta_), dt(dt_), d0(d0_), r0(r0_) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(alpha > 0.0 && alpha * dt < 1.0)) {
        throw std::invalid_argument("alpha*dt must lie in (0, 1)");
    }
    if (!(beta > 0.0 && beta * dt < 1.0)) {
        throw std::invalid_argument("beta*dt must lie in (0, 1)");
    }
    if (!(d0 > 0.0)) throw std::invalid_argument("initial demand must be > 0");
    if (!(r0 > 0.0)) throw std::invalid_argument("initial resource must be > 0");
}

StepResult step(double demand, double resource, double p, const SimParams& params) {
    const double demand_deaths = params.alpha * demand * params.dt;
    const double resource_deaths = std::min(demand_deaths, params.beta * resource * params.dt);
    return {
        demand + demand_birth_rate(p, params.rates) * params.dt - demand_deaths,
        resource + resource_birth_rate(p, params.rates) * params.dt - resource_deaths,
    };
}

SimSeries simulate(std::span<const double> prices, const SimParams& params,
                   std::span<const Timestamp> timestamps, std::span<const double> originals) {
    if (prices.empty()) {
        throw std::invalid_argument("simulate: empty price sequence");
    }
    if (!timestamps.empty() && timestamps.size() != prices.size()) {
        throw std::invalid_argument("simulate: timestamps do not run parallel to prices");
    }
    if (!originals.empty() && originals.size() != prices.size()) {
        throw std::invalid_argument("simulate: originals do not run parallel to prices");
    }

    SimSeries series{params, {}};
    series.states.reserve(prices.size() + 1);

    SimState seed;
    seed.step = 0;
    seed.demand = params.d0;
    seed.resource = params.r0;
    series.states.push_back(seed);

    double d = params.d0;
    double r = params.r0;
    for (std::size_t j = 0; j < prices.size(); ++j) {
        const StepResult next = step(d, r, prices[j], params);
        SimState state;
        state.step = j + 1;
        if (!timestamps.empty()) state.timestamp = timestamps[j];
        state.price = prices[j];
        if (!originals.empty()) state.price_original = originals[j];
        state.demand = next.demand;
        state.resource = next.resource;
        series.states.push_back(state);
        d = next.demand;
        r = next.resource;
    }
    return series;
}

SimSeries replay_pipeline(const Trace& trace, FixedPrice fixed, const SimParams& params,
                          double flat_threshold, bool strict) {
    const TraceStats stats = trace_stats(trace);
    if (check_oscillation(stats, flat_threshold, strict) == OscillationVerdict::Rejection) {
        throw FlatTraceError(trace.source_path +
                             ": flat price trace rejected (change ratio below threshold)");
    }

    const std::vector<double> prices = transform_trace(trace, fixed);
    std::vector<Timestamp> timestamps;
    std::vector<double> originals;
    timestamps.reserve(trace.records.size());
    originals.reserve(trace.records.size());
    for (const PriceRecord& rec : trace.records) {
        timestamps.push_back(rec.timestamp);
        originals.push_back(rec.price_original);
    }
    return simulate(prices, params, timestamps, originals);
}

}  // namespace spotsim
