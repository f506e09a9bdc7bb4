// Command-line front end: simulate / sweep / rates / inspect.
//
// Exit codes are a fixed public table: 0 success, 2 usage error, 3 parse
// failure, 4 empty filter result, 5 flat-trace rejection (strict). No
// subcommand leaves an output file behind on a nonzero exit.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spotsim/analysis.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/errors.hpp"
#include "spotsim/numformat.hpp"
#include "spotsim/pricing.hpp"
#include "spotsim/rates.hpp"
#include "spotsim/report.hpp"
#include "spotsim/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitEmptyFilter = 4;
constexpr int kExitFlatTrace = 5;

struct Options {
    std::string trace_path;
    std::string format = "auto";
    bool lenient = false;

    double fixed_price = 0.0;

    double k = 5.0, a = 3.0, b = 3.0;
    double alpha = 0.8, beta = 0.8, dt = 1.0;
    double d0 = 5.0, r0 = 5.0;

    std::string instance_type, os, zone;

    bool strict = false;
    double flat_threshold = 0.05;
    double drop_threshold = 0.5;
    double split_price = 0.5;

    std::string out_csv, out_svg, out_report;

    std::vector<double> sweep_k, sweep_a, sweep_b, sweep_alpha, sweep_beta, sweep_d0, sweep_r0;

    int samples = 101;
};

spotsim::TraceFormat parse_format(const std::string& name) {
    if (name == "csv") return spotsim::TraceFormat::Csv;
    if (name == "ec2-tsv") return spotsim::TraceFormat::Ec2Tsv;
    if (name == "auto") return spotsim::TraceFormat::Auto;
    throw std::invalid_argument("unknown trace format '" + name + "'");
}

spotsim::Trace load_filtered_trace(const Options& opt) {
    spotsim::ParseOptions popts;
    popts.format = parse_format(opt.format);
    popts.lenient = opt.lenient;
    spotsim::Trace trace = spotsim::parse_trace(opt.trace_path, popts);

    spotsim::TraceFilter filter;
    if (!opt.instance_type.empty()) filter.instance_type = opt.instance_type;
    if (!opt.os.empty()) filter.os = opt.os;
    if (!opt.zone.empty()) filter.zone = opt.zone;
    if (filter.instance_type || filter.os || filter.zone) {
        trace = spotsim::filter_trace(trace, filter);
    }
    return trace;
}

spotsim::SimParams make_params(const Options& opt) {
    return spotsim::SimParams(spotsim::RateParams(opt.k, opt.a, opt.b), opt.alpha, opt.beta,
                              opt.dt, opt.d0, opt.r0);
}

// Runs the oscillation gate; returns normally unless strict mode rejects.
void gate_oscillation(const spotsim::TraceStats& stats, const Options& opt) {
    const auto verdict = spotsim::check_oscillation(stats, opt.flat_threshold, opt.strict);
    if (verdict == spotsim::OscillationVerdict::Rejection) {
        throw spotsim::FlatTraceError(opt.trace_path + ": flat price trace rejected (change ratio " +
                                      spotsim::format_sig6(stats.change_ratio) +
                                      " below threshold " +
                                      spotsim::format_sig6(opt.flat_threshold) + ")");
    }
    if (verdict == spotsim::OscillationVerdict::Warning) {
        std::cerr << "warning: " << opt.trace_path << ": nearly flat price trace (change ratio "
                  << spotsim::format_sig6(stats.change_ratio) << " below threshold "
                  << spotsim::format_sig6(opt.flat_threshold)
                  << "); demand-resource interaction will be weak\n";
    }
}

struct StagedOutput {
    std::string path;
    std::string content;
};

// All-or-nothing file emission: every payload lands in a sibling temp
// file first and the renames happen only after every write succeeded.
void commit_outputs(const std::vector<StagedOutput>& outputs) {
    namespace fs = std::filesystem;
    std::vector<fs::path> temps;
    try {
        for (const StagedOutput& out : outputs) {
            const fs::path tmp = out.path + ".tmp";
            temps.push_back(tmp);
            std::ofstream file(tmp, std::ios::binary);
            if (!file) throw std::runtime_error(out.path + ": cannot open for writing");
            file << out.content;
            file.flush();
            if (!file) throw std::runtime_error(out.path + ": write failure");
        }
        for (std::size_t i = 0; i < outputs.size(); ++i) {
            fs::rename(temps[i], outputs[i].path);
        }
    } catch (...) {
        std::error_code ec;
        for (const fs::path& tmp : temps) fs::remove(tmp, ec);
        throw;
    }
}

nlohmann::ordered_json stats_json(const spotsim::TraceStats& stats) {
    nlohmann::ordered_json j;
    j["count"] = stats.count;
    j["min_price"] = stats.min_price;
    j["max_price"] = stats.max_price;
    j["distinct_prices"] = stats.distinct_prices;
    j["change_ratio"] = stats.change_ratio;
    return j;
}

int run_simulate(const Options& opt) {
    const spotsim::Trace trace = load_filtered_trace(opt);
    const spotsim::TraceStats stats = spotsim::trace_stats(trace);
    gate_oscillation(stats, opt);

    const spotsim::SimParams params = make_params(opt);
    const spotsim::SimSeries series =
        spotsim::replay_pipeline(trace, spotsim::FixedPrice(opt.fixed_price), params,
                                 opt.flat_threshold, /*strict=*/false);
    const spotsim::AnalysisReport report =
        spotsim::analyze(series, opt.drop_threshold, opt.split_price);

    const std::string csv = spotsim::series_csv(series);

    std::vector<StagedOutput> outputs;
    if (!opt.out_csv.empty()) {
        outputs.push_back({opt.out_csv, csv});
    }
    if (!opt.out_svg.empty()) {
        spotsim::ChartSpec chart;
        chart.title = std::filesystem::path(opt.trace_path).filename().string();
        outputs.push_back({opt.out_svg, spotsim::render_svg_string(series, chart)});
    }
    if (!opt.out_report.empty()) {
        auto root = nlohmann::ordered_json::parse(spotsim::to_json(report));
        root["trace_stats"] = stats_json(stats);
        outputs.push_back({opt.out_report, root.dump(2) + "\n"});
    }
    commit_outputs(outputs);

    if (opt.out_csv.empty()) {
        std::cout << csv;
    }
    std::cerr << spotsim::to_text(report);
    return kExitOk;
}

int run_sweep(const Options& opt) {
    const spotsim::Trace trace = load_filtered_trace(opt);
    const spotsim::TraceStats stats = spotsim::trace_stats(trace);
    gate_oscillation(stats, opt);

    const auto grid = [](const std::vector<double>& swept, double base) {
        return swept.empty() ? std::vector<double>{base} : swept;
    };
    const std::vector<double> ks = grid(opt.sweep_k, opt.k);
    const std::vector<double> as = grid(opt.sweep_a, opt.a);
    const std::vector<double> bs = grid(opt.sweep_b, opt.b);
    const std::vector<double> alphas = grid(opt.sweep_alpha, opt.alpha);
    const std::vector<double> betas = grid(opt.sweep_beta, opt.beta);
    const std::vector<double> d0s = grid(opt.sweep_d0, opt.d0);
    const std::vector<double> r0s = grid(opt.sweep_r0, opt.r0);

    // Every cell's parameters are validated before any cell runs.
    std::vector<spotsim::SimParams> cells;
    for (const double k : ks)
        for (const double a : as)
            for (const double b : bs)
                for (const double alpha : alphas)
                    for (const double beta : betas)
                        for (const double d0 : d0s)
                            for (const double r0 : r0s)
                                cells.emplace_back(spotsim::RateParams(k, a, b), alpha, beta,
                                                   opt.dt, d0, r0);

    const std::vector<double> prices =
        spotsim::transform_trace(trace, spotsim::FixedPrice(opt.fixed_price));

    std::string csv =
        "k,a,b,alpha,beta,d0,r0,final_demand,final_resource,max_relative_drop,drop_count\n";
    for (const spotsim::SimParams& params : cells) {
        const spotsim::SimSeries series = spotsim::simulate(prices, params);
        double max_drop = 0.0;
        for (std::size_t i = 1; i < series.states.size(); ++i) {
            max_drop = std::max(
                max_drop, 1.0 - series.states[i].resource / series.states[i - 1].resource);
        }
        const std::size_t drop_count = spotsim::detect_drops(series, opt.drop_threshold).size();
        const spotsim::SimState& last = series.states.back();

        using spotsim::format_roundtrip;
        using spotsim::format_sig6;
        csv += format_roundtrip(params.rates.k) + ',' + format_roundtrip(params.rates.a) + ',' +
               format_roundtrip(params.rates.b) + ',' + format_roundtrip(params.alpha) + ',' +
               format_roundtrip(params.beta) + ',' + format_roundtrip(params.d0) + ',' +
               format_roundtrip(params.r0) + ',' + format_sig6(last.demand) + ',' +
               format_sig6(last.resource) + ',' + format_sig6(max_drop) + ',' +
               std::to_string(drop_count) + '\n';
    }

    if (!opt.out_csv.empty()) {
        commit_outputs({{opt.out_csv, csv}});
    } else {
        std::cout << csv;
    }
    std::cerr << "sweep: " << cells.size() << " cells over " << prices.size() << " price records\n";
    return kExitOk;
}

int run_rates(const Options& opt) {
    const spotsim::RateParams params(opt.k, opt.a, opt.b);
    const std::string csv = spotsim::rate_curves_csv(spotsim::dump_rate_curves(params, opt.samples));
    if (!opt.out_csv.empty()) {
        commit_outputs({{opt.out_csv, csv}});
    } else {
        std::cout << csv;
    }
    return kExitOk;
}

int run_inspect(const Options& opt) {
    const spotsim::Trace trace = load_filtered_trace(opt);
    const spotsim::TraceStats stats = spotsim::trace_stats(trace);
    const auto verdict = spotsim::check_oscillation(stats, opt.flat_threshold, opt.strict);

    nlohmann::ordered_json j = stats_json(stats);
    j["verdict"] = spotsim::to_string(verdict);
    std::cout << j.dump(2) << "\n";

    return verdict == spotsim::OscillationVerdict::Rejection ? kExitFlatTrace : kExitOk;
}

void add_trace_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--trace", opt.trace_path, "Price history file")->required();
    cmd->add_option("--format", opt.format, "Trace format: csv, ec2-tsv or auto")
        ->check(CLI::IsMember({"csv", "ec2-tsv", "auto"}))
        ->capture_default_str();
    cmd->add_flag("--lenient", opt.lenient, "Skip unparseable rows instead of failing");
    cmd->add_option("--instance-type", opt.instance_type, "Keep records with this instance type");
    cmd->add_option("--os", opt.os, "Keep records with this OS label");
    cmd->add_option("--zone", opt.zone, "Keep records with this availability zone");
}

void add_model_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--k", opt.k, "Maximum birth rate")->capture_default_str();
    cmd->add_option("--a", opt.a, "Price exponent of the birth rates")->capture_default_str();
    cmd->add_option("--b", opt.b, "Root exponent of the birth rates")->capture_default_str();
    cmd->add_option("--alpha", opt.alpha, "Demand death rate per unit time")->capture_default_str();
    cmd->add_option("--beta", opt.beta, "Resource death rate per unit time")->capture_default_str();
    cmd->add_option("--dt", opt.dt, "Step length per price record")->capture_default_str();
    cmd->add_option("--d0", opt.d0, "Initial demand amount")->capture_default_str();
    cmd->add_option("--r0", opt.r0, "Initial resource amount")->capture_default_str();
}

void add_gate_flags(CLI::App* cmd, Options& opt) {
    cmd->add_flag("--strict", opt.strict, "Reject flat traces instead of warning");
    cmd->add_option("--flat-threshold", opt.flat_threshold,
                    "Minimum change ratio for an oscillating trace")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Reconstructs hidden demand/resource dynamics of a cloud spot market\n"
                 "from its visible spot-price history."};
    app.require_subcommand(1);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Replay a price trace through the demand/resource recurrence");
    add_trace_flags(simulate, opt);
    simulate->add_option("--fixed-price", opt.fixed_price, "On-demand price in USD per hour")
        ->required();
    add_model_flags(simulate, opt);
    add_gate_flags(simulate, opt);
    simulate->add_option("--drop-threshold", opt.drop_threshold,
                         "Relative resource decrease that counts as a sharp drop")
        ->capture_default_str();
    simulate->add_option("--split-price", opt.split_price,
                         "Transformed price separating the cheap and expensive segments")
        ->capture_default_str();
    simulate->add_option("--out-csv", opt.out_csv, "Write the state series CSV here");
    simulate->add_option("--out-svg", opt.out_svg, "Render the chart here");
    simulate->add_option("--out-report", opt.out_report, "Write the JSON analysis report here");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Run one simulation per cell of a parameter grid on the same trace");
    add_trace_flags(sweep, opt);
    sweep->add_option("--fixed-price", opt.fixed_price, "On-demand price in USD per hour")
        ->required();
    add_model_flags(sweep, opt);
    add_gate_flags(sweep, opt);
    sweep->add_option("--drop-threshold", opt.drop_threshold,
                      "Relative resource decrease that counts as a sharp drop")
        ->capture_default_str();
    sweep->add_option("--sweep-k", opt.sweep_k, "Comma list of k values")->delimiter(',');
    sweep->add_option("--sweep-a", opt.sweep_a, "Comma list of a values")->delimiter(',');
    sweep->add_option("--sweep-b", opt.sweep_b, "Comma list of b values")->delimiter(',');
    sweep->add_option("--sweep-alpha", opt.sweep_alpha, "Comma list of alpha values")
        ->delimiter(',');
    sweep->add_option("--sweep-beta", opt.sweep_beta, "Comma list of beta values")->delimiter(',');
    sweep->add_option("--sweep-d0", opt.sweep_d0, "Comma list of initial demand values")
        ->delimiter(',');
    sweep->add_option("--sweep-r0", opt.sweep_r0, "Comma list of initial resource values")
        ->delimiter(',');
    sweep->add_option("--out-csv", opt.out_csv, "Write the sweep summary CSV here");

    CLI::App* rates = app.add_subcommand("rates", "Emit the birth-rate curves as CSV");
    rates->add_option("--k", opt.k, "Maximum birth rate")->capture_default_str();
    rates->add_option("--a", opt.a, "Price exponent of the birth rates")->capture_default_str();
    rates->add_option("--b", opt.b, "Root exponent of the birth rates")->capture_default_str();
    rates->add_option("--samples", opt.samples, "Grid points over [0, 1]")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    rates->add_option("--out-csv", opt.out_csv, "Write the curve CSV here");

    CLI::App* inspect = app.add_subcommand(
        "inspect", "Print trace statistics and the oscillation verdict as JSON");
    add_trace_flags(inspect, opt);
    add_gate_flags(inspect, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(simulate)) return run_simulate(opt);
        if (app.got_subcommand(sweep)) return run_sweep(opt);
        if (app.got_subcommand(rates)) return run_rates(opt);
        return run_inspect(opt);
    } catch (const spotsim::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spotsim::EmptyFilterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyFilter;
    } catch (const spotsim::FlatTraceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlatTrace;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
