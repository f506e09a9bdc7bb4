// End-to-end checks of the spotsim executable: exit codes, output files,
// determinism, and cross-subcommand consistency. The binary under test
// comes in as argv[1].

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_checks = 0;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

std::string g_cli;
fs::path g_dir;

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs the CLI with stdout captured to a file; returns the exit code.
int run(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = "'" + g_cli + "' " + args;
    cmd += stdout_file.empty() ? " >/dev/null" : " >" + quoted(stdout_file);
    cmd += " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Oscillating two-level price trace long enough for drops to develop.
std::string oscillating_csv() {
    std::string text = "timestamp,price\n";
    int hour = 0;
    char stamp[64];
    for (int cycle = 0; cycle < 4; ++cycle) {
        for (int i = 0; i < 30; ++i, ++hour) {
            std::snprintf(stamp, sizeof stamp, "2024-01-%02dT%02d:00:00Z,0.043\n", hour / 24 + 1,
                          hour % 24);
            text += stamp;
        }
        for (int i = 0; i < 15; ++i, ++hour) {
            std::snprintf(stamp, sizeof stamp, "2024-01-%02dT%02d:00:00Z,0.154\n", hour / 24 + 1,
                          hour % 24);
            text += stamp;
        }
    }
    return text;
}

void test_exit_codes() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path flat = g_dir / "flat.csv";
    const fs::path bad = g_dir / "bad.csv";
    write_file(trace, oscillating_csv());
    write_file(flat,
               "timestamp,price\n"
               "2024-01-01T00:00:00Z,0.05\n"
               "2024-01-01T01:00:00Z,0.05\n"
               "2024-01-01T02:00:00Z,0.05\n");
    write_file(bad, "timestamp,price\n2024-01-01T00:00:00Z,not-a-price\n");

    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154") == 0,
          "simulate on a healthy trace exits 0");
    check(run("simulate --trace " + quoted(trace)) == 2, "missing required flag exits 2");
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0") == 2,
          "non-positive fixed price exits 2");
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154 --alpha 1.5") == 2,
          "unstable death rate exits 2");
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154 --format bogus") == 2,
          "unknown format name exits 2");
    check(run("nonsense") == 2, "unknown subcommand exits 2");
    check(run("") == 2, "missing subcommand exits 2");
    check(run("--help") == 0, "help exits 0");
    check(run("simulate --help") == 0, "subcommand help exits 0");

    check(run("simulate --trace " + quoted(bad) + " --fixed-price 0.154") == 3,
          "unparseable trace exits 3");
    check(run("simulate --trace " + quoted(g_dir / "missing.csv") + " --fixed-price 0.154") == 3,
          "missing trace file exits 3");

    check(run("simulate --trace " + quoted(trace) +
              " --fixed-price 0.154 --instance-type m9.none") == 4,
          "filter matching nothing exits 4");

    check(run("simulate --trace " + quoted(flat) + " --fixed-price 0.154 --strict") == 5,
          "flat trace in strict mode exits 5");
    check(run("simulate --trace " + quoted(flat) + " --fixed-price 0.154") == 0,
          "flat trace without strict mode exits 0");
    check(run("inspect --trace " + quoted(flat) + " --strict") == 5,
          "inspect of a flat trace in strict mode exits 5");
}

void test_no_files_on_failure() {
    const fs::path flat = g_dir / "flat2.csv";
    write_file(flat,
               "timestamp,price\n"
               "2024-01-01T00:00:00Z,0.05\n"
               "2024-01-01T01:00:00Z,0.05\n");
    const fs::path csv = g_dir / "reject.csv";
    const fs::path svg = g_dir / "reject.svg";
    const fs::path json = g_dir / "reject.json";

    const int code = run("simulate --trace " + quoted(flat) +
                         " --fixed-price 0.154 --strict --out-csv " + quoted(csv) +
                         " --out-svg " + quoted(svg) + " --out-report " + quoted(json));
    check(code == 5, "strict rejection with output flags exits 5");
    check(!fs::exists(csv) && !fs::exists(svg) && !fs::exists(json),
          "no output file appears on a nonzero exit");
    bool leftovers = false;
    for (const auto& entry : fs::directory_iterator(g_dir)) {
        if (entry.path().extension() == ".tmp") leftovers = true;
    }
    check(!leftovers, "no temp files are left behind");

    // A sweep with an invalid grid cell must not write its summary either.
    const fs::path osc = g_dir / "osc.csv";
    const fs::path summary = g_dir / "sweep_invalid.csv";
    const int sweep_code = run("sweep --trace " + quoted(osc) +
                               " --fixed-price 0.154 --sweep-alpha 0.5,1.5 --out-csv " +
                               quoted(summary));
    check(sweep_code == 2, "a sweep containing an invalid cell exits 2");
    check(!fs::exists(summary), "the sweep summary is not written when a cell is invalid");
}

void test_determinism() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path dir1 = g_dir / "run1";
    const fs::path dir2 = g_dir / "run2";
    fs::create_directories(dir1);
    fs::create_directories(dir2);

    for (const fs::path& dir : {dir1, dir2}) {
        const int code = run("simulate --trace " + quoted(trace) +
                             " --fixed-price 0.154 --out-csv " + quoted(dir / "series.csv") +
                             " --out-svg " + quoted(dir / "chart.svg") + " --out-report " +
                             quoted(dir / "report.json"));
        check(code == 0, "simulate with all outputs exits 0");
    }
    check(slurp(dir1 / "series.csv") == slurp(dir2 / "series.csv"),
          "series csv is byte-identical across reruns");
    check(slurp(dir1 / "chart.svg") == slurp(dir2 / "chart.svg"),
          "chart svg is byte-identical across reruns");
    check(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"),
          "report json is byte-identical across reruns");

    const fs::path stdout_csv = g_dir / "stdout.csv";
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154", stdout_csv) == 0,
          "simulate without --out-csv exits 0");
    check(slurp(stdout_csv) == slurp(dir1 / "series.csv"),
          "stdout csv equals the file csv");
}

void test_series_csv_shape() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path out = g_dir / "shape.csv";
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154 --out-csv " +
              quoted(out)) == 0,
          "simulate exits 0");
    const auto lines = lines_of(slurp(out));
    check(lines.size() == 182, "one header, one seed row, one row per record");
    check(lines.at(0) == "step,timestamp,price_original,price_transformed,demand,resource",
          "series csv header is fixed");
    check(lines.at(1) == "0,,,,5,5", "seed row has empty trace-derived cells");
    check(lines.at(2).rfind("1,2024-01-01T00:00:00Z,0.043,0.279221,", 0) == 0,
          "first step row carries timestamp and both prices");
}

void test_report_json() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path out = g_dir / "report_only.json";
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154 --out-report " +
              quoted(out)) == 0,
          "simulate with only a report output exits 0");
    const std::string text = slurp(out);
    check(text.find("\"fixed_points\"") != std::string::npos, "report lists fixed points");
    check(text.find("\"critical_price\"") != std::string::npos, "report lists the critical price");
    check(text.find("\"drops\"") != std::string::npos, "report lists drops");
    check(text.find("\"segment_stats\"") != std::string::npos, "report lists segment stats");
    check(text.find("\"trace_stats\"") != std::string::npos, "report embeds trace stats");
    check(text.find("\"unbounded\"") != std::string::npos,
          "the clamped price regime is marked unbounded");

    const std::size_t order_check[] = {
        text.find("\"fixed_points\""), text.find("\"critical_price\""), text.find("\"drops\""),
        text.find("\"segment_stats\""), text.find("\"trace_stats\"")};
    bool ascending = true;
    for (int i = 1; i < 5; ++i) {
        if (order_check[i] < order_check[i - 1]) ascending = false;
    }
    check(ascending, "report keys keep their documented order");
}

void test_sweep() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path single = g_dir / "sweep_single.csv";
    const fs::path grid = g_dir / "sweep_grid.csv";
    const fs::path series = g_dir / "sweep_series.csv";

    check(run("sweep --trace " + quoted(trace) + " --fixed-price 0.154 --out-csv " +
              quoted(single)) == 0,
          "sweep without grids exits 0");
    const auto single_lines = lines_of(slurp(single));
    check(single_lines.size() == 2, "a grid-free sweep has exactly one cell");
    check(single_lines.at(0) ==
              "k,a,b,alpha,beta,d0,r0,final_demand,final_resource,max_relative_drop,drop_count",
          "sweep header is fixed");

    // The single cell must agree with a plain simulate run.
    check(run("simulate --trace " + quoted(trace) + " --fixed-price 0.154 --out-csv " +
              quoted(series)) == 0,
          "reference simulate exits 0");
    const auto series_lines = lines_of(slurp(series));
    const std::string& last = series_lines.back();
    // Final demand/resource are the last two cells of the last series row.
    std::size_t cut = last.rfind(',');
    const std::string final_resource = last.substr(cut + 1);
    std::size_t cut2 = last.rfind(',', cut - 1);
    const std::string final_demand = last.substr(cut2 + 1, cut - cut2 - 1);
    check(single_lines.at(1).find("," + final_demand + "," + final_resource + ",") !=
              std::string::npos,
          "sweep finals equal the simulate finals");

    check(run("sweep --trace " + quoted(trace) +
              " --fixed-price 0.154 --sweep-alpha 0.5,0.8 --sweep-beta 0.3,0.6,0.9 --out-csv " +
              quoted(grid)) == 0,
          "sweep over a 2x3 grid exits 0");
    const auto grid_lines = lines_of(slurp(grid));
    check(grid_lines.size() == 7, "2x3 grid yields six cells");
    check(grid_lines.at(1).rfind("5,3,3,0.5,0.3,", 0) == 0 &&
              grid_lines.at(2).rfind("5,3,3,0.5,0.6,", 0) == 0 &&
              grid_lines.at(3).rfind("5,3,3,0.5,0.9,", 0) == 0 &&
              grid_lines.at(4).rfind("5,3,3,0.8,0.3,", 0) == 0,
          "grid cells enumerate in row-major order");
}

void test_rates() {
    const fs::path out = g_dir / "rates.csv";
    check(run("rates --out-csv " + quoted(out)) == 0, "rates exits 0");
    const auto lines = lines_of(slurp(out));
    check(lines.size() == 102, "default rates dump has 101 samples");
    check(lines.at(0) == "p,demand_rate,resource_rate", "rates header is fixed");
    check(lines.at(1) == "0,5,0", "the p = 0 endpoint is exact");
    check(lines.at(101) == "1,0,5", "the p = 1 endpoint is exact");

    check(run("rates --samples 1") == 2, "a one-sample grid exits 2");
    check(run("rates --k 0") == 2, "invalid shape parameters exit 2");

    const fs::path stdout_csv = g_dir / "rates_stdout.csv";
    check(run("rates --samples 7", stdout_csv) == 0, "rates to stdout exits 0");
    check(lines_of(slurp(stdout_csv)).size() == 8, "sample count controls the grid");
}

void test_inspect() {
    const fs::path trace = g_dir / "osc.csv";
    const fs::path out = g_dir / "inspect.json";
    check(run("inspect --trace " + quoted(trace), out) == 0, "inspect exits 0");
    const std::string text = slurp(out);
    check(text.find("\"count\": 180") != std::string::npos, "inspect reports the record count");
    check(text.find("\"min_price\": 0.043") != std::string::npos, "inspect reports the min price");
    check(text.find("\"max_price\": 0.154") != std::string::npos, "inspect reports the max price");
    check(text.find("\"distinct_prices\": 2") != std::string::npos,
          "inspect reports distinct prices");
    // Long constant blocks: 7 changes over 179 pairs sits under the
    // default threshold, so this trace draws a warning...
    check(text.find("\"verdict\": \"warning\"") != std::string::npos,
          "a block trace is warned about at the default threshold");

    // ...and passes once the threshold admits its change ratio.
    const fs::path tuned = g_dir / "inspect_tuned.json";
    check(run("inspect --trace " + quoted(trace) + " --flat-threshold 0.03", tuned) == 0,
          "inspect with a tuned threshold exits 0");
    check(slurp(tuned).find("\"verdict\": \"ok\"") != std::string::npos,
          "an oscillating trace is ok once the threshold fits");

    const fs::path flat = g_dir / "flat.csv";
    const fs::path flat_out = g_dir / "inspect_flat.json";
    check(run("inspect --trace " + quoted(flat), flat_out) == 0,
          "inspect of a flat trace exits 0 without strict mode");
    check(slurp(flat_out).find("\"verdict\": \"warning\"") != std::string::npos,
          "a flat trace draws a warning verdict");
}

void test_formats_and_filters() {
    const fs::path tsv = g_dir / "aws.tsv";
    write_file(tsv,
               "SPOTINSTANCEPRICE\t0.050000\t2024-01-01T02:00:00Z\tm3.large\tLinux/UNIX\tus-east-1a\n"
               "SPOTINSTANCEPRICE\t0.043000\t2024-01-01T01:00:00Z\tm3.large\tLinux/UNIX\tus-east-1a\n"
               "SPOTINSTANCEPRICE\t0.070000\t2024-01-01T00:00:00Z\tc3.xlarge\tLinux/UNIX\tus-east-1a\n"
               "SPOTINSTANCEPRICE\t0.061000\t2024-01-01T00:00:00Z\tm3.large\tLinux/UNIX\tus-east-1a\n");

    const fs::path auto_csv = g_dir / "tsv_auto.csv";
    check(run("simulate --trace " + quoted(tsv) + " --fixed-price 0.154 --out-csv " +
              quoted(auto_csv)) == 0,
          "auto-detected tsv simulates cleanly");
    const auto lines = lines_of(slurp(auto_csv));
    check(lines.size() == 6, "all tsv records flow through");
    check(lines.at(2).find("2024-01-01T00:00:00Z,0.07") != std::string::npos &&
              lines.at(3).find("2024-01-01T00:00:00Z,0.061") != std::string::npos &&
              lines.at(5).find("2024-01-01T02:00:00Z,0.05") != std::string::npos,
          "descending tsv input is normalized to ascending time, ties in file order");

    const fs::path filtered = g_dir / "tsv_filtered.csv";
    check(run("simulate --trace " + quoted(tsv) + " --format ec2-tsv --instance-type m3.large"
              " --fixed-price 0.154 --out-csv " + quoted(filtered)) == 0,
          "explicit format with a filter simulates cleanly");
    check(lines_of(slurp(filtered)).size() == 5, "the filter keeps only matching records");

    const fs::path mixed = g_dir / "mixed.csv";
    write_file(mixed,
               "timestamp,price\n"
               "2024-01-01T00:00:00Z,0.05\n"
               "garbage-row,0.06\n"
               "2024-01-01T02:00:00Z,0.07\n");
    check(run("simulate --trace " + quoted(mixed) + " --fixed-price 0.154") == 3,
          "a bad row is fatal by default");
    const fs::path lenient_out = g_dir / "lenient.csv";
    check(run("simulate --trace " + quoted(mixed) + " --lenient --fixed-price 0.154 --out-csv " +
              quoted(lenient_out)) == 0,
          "a bad row is skipped under --lenient");
    check(lines_of(slurp(lenient_out)).size() == 4, "lenient parsing kept the good rows");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-spotsim>\n";
        return 2;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / ("spotsim_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(g_dir);

    test_exit_codes();
    test_no_files_on_failure();
    test_determinism();
    test_series_csv_shape();
    test_report_json();
    test_sweep();
    test_rates();
    test_inspect();
    test_formats_and_filters();

    fs::remove_all(g_dir);
    std::cout << g_checks << " checks, " << g_failures << " failures\n";
    return g_failures == 0 ? 0 : 1;
}
