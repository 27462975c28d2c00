// covpath command line: chains the map reader, planner and mission
// simulator, and benchmarks the processing stages. Everything goes through
// the shared library's C API.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covpath/covpath.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct GridDeleter {
    void operator()(covpath_grid* g) const { covpath_grid_free(g); }
};
struct WaypointsDeleter {
    void operator()(covpath_waypoints* w) const { covpath_waypoints_free(w); }
};
struct GraphDeleter {
    void operator()(covpath_graph* g) const { covpath_graph_free(g); }
};
struct PlanDeleter {
    void operator()(covpath_plan* p) const { covpath_plan_free(p); }
};
struct RunlogDeleter {
    void operator()(covpath_runlog* r) const { covpath_runlog_free(r); }
};

using GridPtr = std::unique_ptr<covpath_grid, GridDeleter>;
using WaypointsPtr = std::unique_ptr<covpath_waypoints, WaypointsDeleter>;
using GraphPtr = std::unique_ptr<covpath_graph, GraphDeleter>;
using PlanPtr = std::unique_ptr<covpath_plan, PlanDeleter>;
using RunlogPtr = std::unique_ptr<covpath_runlog, RunlogDeleter>;

// Nonzero statuses exit with the status value so scripts can tell the
// failure classes apart.
void check(covpath_status status, const std::string& stage) {
    if (status == COVPATH_OK) return;
    std::cerr << "covpath: " << stage << " failed (" << covpath_status_name(status)
              << "): " << covpath_last_error() << "\n";
    std::exit(static_cast<int>(status));
}

bool parse_pair(const std::string& text, double& a, double& b) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        a = std::stod(text.substr(0, comma));
        b = std::stod(text.substr(comma + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            std::cerr << "covpath: '" << item << "' is not a number\n";
            std::exit(static_cast<int>(COVPATH_ERR_INVALID_ARGUMENT));
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const double v : parse_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

// Shared flag bundles -------------------------------------------------------

struct ReaderFlags {
    int sigma = 3;
    int kappa = 128;
    int erode = 10;
    std::string axis_order = "row-col";

    void attach(CLI::App* cmd) {
        cmd->add_option("--sigma", sigma, "Gaussian smoothing stddev in pixels")
            ->capture_default_str();
        cmd->add_option("--kappa", kappa, "binarization threshold (0-255)")
            ->capture_default_str();
        cmd->add_option("--erode", erode, "erosion kernel side in pixels")
            ->capture_default_str();
        cmd->add_option("--axis-order", axis_order,
                        "world-axis convention: row-col maps x to the pixel row (default), "
                        "col-row swaps")
            ->check(CLI::IsMember({"row-col", "col-row"}));
    }

    covpath_reader_params params() const {
        covpath_reader_params p;
        covpath_reader_params_init(&p);
        p.sigma = sigma;
        p.kappa = kappa;
        p.erosion_k = erode;
        p.axis_order = axis_order == "col-row" ? 1 : 0;
        return p;
    }
};

struct MissionFlags {
    double tol_pos = 0.05;
    double tol_yaw = 0.08;
    double timeout = 10.0;
    double drift = 0.0;
    std::uint64_t seed = 0;
    int retries = 5;
    double assist_delay = 1.0;
    int scan_n = 0;
    std::string scan_gestures = "stand_up,sit";
    std::string interrupt_at;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol-pos", tol_pos, "position tolerance in meters")
            ->capture_default_str();
        cmd->add_option("--tol-yaw", tol_yaw, "yaw tolerance in radians")->capture_default_str();
        cmd->add_option("--timeout", timeout, "navigation timeout in seconds")
            ->capture_default_str();
        cmd->add_option("--drift", drift, "heading-bias drift rate in rad/sqrt(s)")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "seed for drift and map generation")
            ->capture_default_str();
        cmd->add_option("--retries", retries, "move attempts per waypoint before conceding")
            ->capture_default_str();
        cmd->add_option("--assist-delay", assist_delay,
                        "seconds the operator drives during a takeover")
            ->capture_default_str();
        cmd->add_option("--scan-n", scan_n, "scan orientations per waypoint (0 disables)")
            ->capture_default_str();
        cmd->add_option("--scan-gestures", scan_gestures, "comma-separated gesture codes")
            ->capture_default_str();
        cmd->add_option("--interrupt-at", interrupt_at,
                        "comma-separated mission times (s) of operator takeovers");
    }

    covpath_mission_params params(std::vector<double>& interrupt_storage) const {
        covpath_mission_params p;
        covpath_mission_params_init(&p);
        p.tol_pos = tol_pos;
        p.tol_yaw = tol_yaw;
        p.timeout = timeout;
        p.drift_rate = drift;
        p.seed = seed;
        p.max_retries = retries;
        p.assist_delay = assist_delay;
        p.scan_orientations = scan_n;
        p.scan_gestures = scan_gestures.c_str();
        interrupt_storage = parse_list(interrupt_at);
        p.interrupts = interrupt_storage.data();
        p.interrupt_count = interrupt_storage.size();
        return p;
    }
};

// Subcommand bodies ----------------------------------------------------------

int cmd_gen_map(const std::string& shape, int width, int height, double resolution,
                std::uint64_t seed, const std::string& out_dir, const std::string& name,
                bool as_json) {
    covpath_grid* grid = nullptr;
    check(covpath_grid_generate(shape.c_str(), width, height, resolution, seed, &grid),
          "gen-map");
    GridPtr guard(grid);
    check(covpath_grid_save(grid, name.c_str(), out_dir.c_str()), "gen-map save");
    const auto path = std::filesystem::path(out_dir) / (name + ".pgm");
    if (as_json) {
        json j{{"map", path.string()},
               {"meta", (std::filesystem::path(out_dir) / (name + ".meta")).string()},
               {"width", covpath_grid_width(grid)},
               {"height", covpath_grid_height(grid)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "wrote " << path.string() << " (" << covpath_grid_width(grid) << "x"
                  << covpath_grid_height(grid) << ")\n";
    }
    return 0;
}

int cmd_read_map(const GridPtr& grid, const ReaderFlags& flags, const std::string& stages_out,
                 const std::string& out_file, bool as_json) {
    const covpath_reader_params params = flags.params();
    covpath_waypoints* wps = nullptr;
    check(covpath_read_map(grid.get(), &params, stages_out.empty() ? nullptr : stages_out.c_str(),
                           &wps),
          "read-map");
    WaypointsPtr guard(wps);
    check(covpath_waypoints_save(wps, out_file.c_str()), "read-map save");
    if (as_json) {
        json j{{"waypoints", out_file}, {"count", covpath_waypoints_count(wps)}};
        if (!stages_out.empty()) j["stages_dir"] = stages_out;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "waypoints: " << covpath_waypoints_count(wps) << "\n";
    }
    return 0;
}

int cmd_plan(const WaypointsPtr& wps, double spacing, double start_x, double start_y,
             bool all_components, const std::string& out_file, const std::string& graph_out,
             bool as_json) {
    covpath_graph* graph = nullptr;
    check(covpath_graph_build(wps.get(), &graph), "plan graph");
    GraphPtr graph_guard(graph);
    if (!graph_out.empty()) check(covpath_graph_export(graph, graph_out.c_str()), "plan graph export");

    if (covpath_graph_component_count(graph) > 1 && !all_components)
        std::cerr << "covpath: warning: graph has " << covpath_graph_component_count(graph)
                  << " components; planning only the one nearest the start"
                     " (use --all-components to chain them)\n";

    covpath_plan_params params;
    covpath_plan_params_init(&params);
    params.spacing = spacing;
    params.start_x = start_x;
    params.start_y = start_y;
    params.all_components = all_components ? 1 : 0;

    covpath_plan* plan = nullptr;
    check(covpath_plan_create(graph, &params, &plan), "plan");
    PlanPtr plan_guard(plan);
    check(covpath_plan_save(plan, out_file.c_str()), "plan save");

    double mean = 0, mn = 0, mx = 0;
    covpath_plan_spacing_stats(plan, &mean, &mn, &mx);
    if (as_json) {
        json j{{"path", out_file},
               {"full_count", covpath_plan_full_count(plan)},
               {"spliced_count", covpath_plan_spliced_count(plan)},
               {"stride", covpath_plan_stride(plan)},
               {"total_length", covpath_plan_total_length(plan)},
               {"planned_components", covpath_plan_planned_components(plan)},
               {"total_components", covpath_plan_total_components(plan)}};
        if (!std::isnan(mean)) {
            j["mean_spacing"] = mean;
            j["min_spacing"] = mn;
            j["max_spacing"] = mx;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "full path: " << covpath_plan_full_count(plan)
                  << " vertices, spliced: " << covpath_plan_spliced_count(plan) << " (stride "
                  << covpath_plan_stride(plan) << "), total length "
                  << covpath_plan_total_length(plan) << " m\n";
        if (!std::isnan(mean))
            std::cout << "spacing mean/min/max: " << mean << " / " << mn << " / " << mx
                      << " m\n";
    }
    return 0;
}

int cmd_simulate(const GridPtr& grid, const PlanPtr& plan, const MissionFlags& flags,
                 const std::string& log_file, const std::string& report_file, bool as_json) {
    std::vector<double> interrupt_storage;
    const covpath_mission_params params = flags.params(interrupt_storage);
    covpath_runlog* log = nullptr;
    check(covpath_mission_run(grid.get(), plan.get(), &params, &log), "simulate");
    RunlogPtr log_guard(log);

    if (!log_file.empty()) check(covpath_runlog_save(log, log_file.c_str()), "simulate log");
    char* report = nullptr;
    check(covpath_runlog_report(log, &report), "simulate report");
    const std::string report_text(report);
    covpath_string_free(report);
    if (!report_file.empty()) {
        std::ofstream out(report_file);
        out << report_text;
        if (!out) {
            std::cerr << "covpath: cannot write report to " << report_file << "\n";
            return static_cast<int>(COVPATH_ERR_IO);
        }
    }

    if (as_json) {
        json times = json::array();
        for (size_t i = 0; i < covpath_runlog_waypoint_count(log); ++i) {
            double seconds = 0;
            int reached = 0, assisted = 0, timeouts = 0;
            covpath_runlog_waypoint(log, i, &seconds, &reached, &assisted, &timeouts);
            times.push_back({{"index", i},
                             {"seconds", seconds},
                             {"reached", reached != 0},
                             {"assisted", assisted != 0},
                             {"timeouts", timeouts}});
        }
        json j{{"reachability_pct", covpath_runlog_reachability(log)},
               {"total_time", covpath_runlog_total_time(log)},
               {"median_waypoint_time", covpath_runlog_median_waypoint_time(log)},
               {"waypoints", times},
               {"captures", covpath_runlog_capture_count(log)},
               {"aborted", covpath_runlog_aborted(log) != 0}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << report_text;
    }
    if (covpath_runlog_aborted(log)) {
        std::cerr << "covpath: mission aborted on a simulator fault; the log is partial\n";
        return static_cast<int>(COVPATH_ERR_SIM_FAULT);
    }
    return 0;
}

// Benchmarks -----------------------------------------------------------------

struct BenchRecord {
    std::size_t input_size;
    int iterations;
    double mean_s;
    double stddev_s;
};

struct Fit {
    double slope;      // seconds per unit input
    double intercept;  // seconds
    double r;          // Pearson correlation
};

Fit least_squares(const std::vector<BenchRecord>& records) {
    const auto n = static_cast<double>(records.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (const BenchRecord& rec : records) {
        const double x = static_cast<double>(rec.input_size), y = rec.mean_s;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    Fit fit{0.0, 0.0, 0.0};
    if (denom != 0.0) {
        fit.slope = (n * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.slope * sx) / n;
    }
    const double var = (n * sxx - sx * sx) * (n * syy - sy * sy);
    if (var > 0.0) fit.r = (n * sxy - sx * sy) / std::sqrt(var);
    return fit;
}

template <typename Fn>
BenchRecord time_loop(std::size_t input_size, int iterations, Fn&& body) {
    using clock = std::chrono::steady_clock;
    body();  // warmup
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations; ++i) {
        const auto t0 = clock::now();
        body();
        const auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    double mean = 0;
    for (const double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0;
    for (const double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size());
    return {input_size, iterations, mean, std::sqrt(var)};
}

int cmd_bench(const std::vector<int>& map_sizes, const std::vector<int>& waypoint_counts,
              int iters_read, int iters_plan, std::uint64_t seed, bool as_json) {
    std::vector<BenchRecord> read_records;
    for (const int size : map_sizes) {
        covpath_grid* grid = nullptr;
        check(covpath_grid_generate("l-room", size, size, 0.1, seed, &grid), "bench gen-map");
        GridPtr guard(grid);
        covpath_reader_params params;
        covpath_reader_params_init(&params);
        read_records.push_back(time_loop(
            static_cast<std::size_t>(size) * static_cast<std::size_t>(size), iters_read, [&] {
                covpath_waypoints* wps = nullptr;
                check(covpath_read_map(grid, &params, nullptr, &wps), "bench read-map");
                covpath_waypoints_free(wps);
            }));
    }

    std::vector<BenchRecord> plan_records;
    for (const int count : waypoint_counts) {
        covpath_waypoints* wps = nullptr;
        check(covpath_waypoints_synthetic(static_cast<std::size_t>(count), 0.1, &wps),
              "bench waypoints");
        WaypointsPtr wps_guard(wps);
        covpath_graph* graph = nullptr;
        check(covpath_graph_build(wps, &graph), "bench graph");
        GraphPtr graph_guard(graph);
        covpath_plan_params params;
        covpath_plan_params_init(&params);
        plan_records.push_back(time_loop(static_cast<std::size_t>(count), iters_plan, [&] {
            covpath_plan* plan = nullptr;
            check(covpath_plan_create(graph, &params, &plan), "bench plan");
            covpath_plan_free(plan);
        }));
    }

    const Fit read_fit = least_squares(read_records);
    const Fit plan_fit = least_squares(plan_records);

    if (as_json) {
        auto dump = [](const std::vector<BenchRecord>& records, const Fit& fit,
                       const char* unit) {
            json rows = json::array();
            for (const BenchRecord& r : records)
                rows.push_back({{"input_size", r.input_size},
                                {"iterations", r.iterations},
                                {"mean_s", r.mean_s},
                                {"stddev_s", r.stddev_s}});
            return json{{"records", rows},
                        {"slope_s_per_unit", fit.slope},
                        {"unit", unit},
                        {"r", fit.r}};
        };
        json j{{"read_map", dump(read_records, read_fit, "pixel")},
               {"plan", dump(plan_records, plan_fit, "waypoint")}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    auto print_table = [](const char* title, const char* size_label,
                          const std::vector<BenchRecord>& records) {
        std::printf("%s\n%-12s %-10s %-14s %-14s\n", title, size_label, "iters", "mean (ms)",
                    "stddev (ms)");
        for (const BenchRecord& r : records)
            std::printf("%-12zu %-10d %-14.4f %-14.4f\n", r.input_size, r.iterations,
                        r.mean_s * 1e3, r.stddev_s * 1e3);
    };
    print_table("read_map", "pixels", read_records);
    if (read_records.size() > 1)
        std::printf("trend: %.2f ns/pixel (r = %.4f)\n", read_fit.slope * 1e9, read_fit.r);
    std::printf("\n");
    print_table("plan", "waypoints", plan_records);
    if (plan_records.size() > 1)
        std::printf("trend: %.3f us/waypoint (r = %.4f)\n", plan_fit.slope * 1e6, plan_fit.r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage path planning over occupancy-grid maps"};
    app.require_subcommand(1);

    // gen-map ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-map", "generate a synthetic tri-level map");
    std::string gen_shape = "l-room", gen_dir = ".", gen_name = "map";
    int gen_width = 200, gen_height = 200;
    double gen_resolution = 0.1;
    std::uint64_t gen_seed = 0;
    bool gen_json = false;
    gen->add_option("--shape", gen_shape, "l-room | corridor | annulus | random-rects")
        ->capture_default_str();
    gen->add_option("--width", gen_width)->capture_default_str();
    gen->add_option("--height", gen_height)->capture_default_str();
    gen->add_option("--resolution", gen_resolution, "meters per pixel")->capture_default_str();
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--out-dir", gen_dir)->capture_default_str();
    gen->add_option("--name", gen_name, "basename of the .pgm/.meta pair")
        ->capture_default_str();
    gen->add_flag("--json", gen_json);

    // read-map ---------------------------------------------------------------
    auto* read = app.add_subcommand("read-map", "extract waypoints from a map");
    std::string read_map_file, read_meta_file, read_stages, read_out = "waypoints.txt";
    ReaderFlags reader_flags;
    bool read_json = false;
    read->add_option("--map", read_map_file, "PGM map image")->required();
    read->add_option("--meta", read_meta_file, "metadata sidecar")->required();
    reader_flags.attach(read);
    read->add_option("--stages-out", read_stages, "directory for the six stage dumps");
    read->add_option("--out", read_out, "waypoint file")->capture_default_str();
    read->add_flag("--json", read_json);

    // plan --------------------------------------------------------------------
    auto* plan_cmd = app.add_subcommand("plan", "order waypoints into a coverage path");
    std::string plan_waypoints, plan_out = "path.txt", plan_start = "0,0", plan_graph_out;
    double plan_spacing = 1.0;
    bool plan_all = false, plan_json = false;
    plan_cmd->add_option("--waypoints", plan_waypoints, "waypoint file from read-map")
        ->required();
    plan_cmd->add_option("--spacing", plan_spacing, "waypoint spacing D in meters")
        ->capture_default_str();
    plan_cmd->add_option("--start", plan_start, "robot start position as x,y")
        ->capture_default_str();
    plan_cmd->add_flag("--all-components", plan_all, "chain disconnected graph components");
    plan_cmd->add_option("--out", plan_out, "path file")->capture_default_str();
    plan_cmd->add_option("--graph-out", plan_graph_out, "optional graph edge-list dump");
    plan_cmd->add_flag("--json", plan_json);

    // simulate ------------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "run the mission FSM over a planned path");
    std::string sim_map, sim_meta, sim_path, sim_log = "run.log", sim_report;
    MissionFlags mission_flags;
    bool sim_json = false;
    sim->add_option("--map", sim_map, "PGM map image")->required();
    sim->add_option("--meta", sim_meta, "metadata sidecar")->required();
    sim->add_option("--path", sim_path, "path file from plan")->required();
    mission_flags.attach(sim);
    sim->add_option("--log", sim_log, "run log output")->capture_default_str();
    sim->add_option("--report", sim_report, "write the report to a file as well");
    sim->add_flag("--json", sim_json);

    // bench ------------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "time read-map and plan across input sizes");
    std::string bench_sizes = "100,200,400,800", bench_counts = "10,100,1000,10000";
    int bench_iters_read = 100, bench_iters_plan = 500;
    std::uint64_t bench_seed = 1;
    bool bench_json = false;
    bench->add_option("--map-sizes", bench_sizes, "square map sides, comma separated")
        ->capture_default_str();
    bench->add_option("--waypoint-counts", bench_counts)->capture_default_str();
    bench->add_option("--iters-read", bench_iters_read)->capture_default_str();
    bench->add_option("--iters-plan", bench_iters_plan)->capture_default_str();
    bench->add_option("--seed", bench_seed)->capture_default_str();
    bench->add_flag("--json", bench_json);

    // run-all ------------------------------------------------------------------
    auto* all = app.add_subcommand("run-all", "generate or load a map, then read, plan, simulate");
    std::string all_map, all_meta, all_shape = "l-room", all_dir = "covpath_out",
                all_start = "0,0";
    int all_width = 200, all_height = 200;
    double all_resolution = 0.1, all_spacing = 1.0;
    ReaderFlags all_reader;
    MissionFlags all_mission;
    bool all_json = false, all_components = false, all_stages = true;
    all->add_option("--map", all_map, "existing PGM map (otherwise one is generated)");
    all->add_option("--meta", all_meta, "metadata sidecar of --map");
    all->add_option("--shape", all_shape)->capture_default_str();
    all->add_option("--width", all_width)->capture_default_str();
    all->add_option("--height", all_height)->capture_default_str();
    all->add_option("--resolution", all_resolution)->capture_default_str();
    all->add_option("--spacing", all_spacing)->capture_default_str();
    all->add_option("--start", all_start)->capture_default_str();
    all->add_flag("--all-components", all_components);
    all->add_flag("!--no-stages", all_stages, "skip the stage dumps");
    all->add_option("--out-dir", all_dir)->capture_default_str();
    all_reader.attach(all);
    all_mission.attach(all);
    all->add_flag("--json", all_json);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed())
        return cmd_gen_map(gen_shape, gen_width, gen_height, gen_resolution, gen_seed, gen_dir,
                           gen_name, gen_json);

    if (read->parsed()) {
        covpath_grid* grid = nullptr;
        check(covpath_grid_load(read_map_file.c_str(), read_meta_file.c_str(), &grid),
              "read-map load");
        return cmd_read_map(GridPtr(grid), reader_flags, read_stages, read_out, read_json);
    }

    if (plan_cmd->parsed()) {
        double sx = 0, sy = 0;
        if (!parse_pair(plan_start, sx, sy)) {
            std::cerr << "covpath: --start expects x,y\n";
            return static_cast<int>(COVPATH_ERR_INVALID_ARGUMENT);
        }
        covpath_waypoints* wps = nullptr;
        check(covpath_waypoints_load(plan_waypoints.c_str(), &wps), "plan load");
        return cmd_plan(WaypointsPtr(wps), plan_spacing, sx, sy, plan_all, plan_out,
                        plan_graph_out, plan_json);
    }

    if (sim->parsed()) {
        covpath_grid* grid = nullptr;
        check(covpath_grid_load(sim_map.c_str(), sim_meta.c_str(), &grid), "simulate load map");
        GridPtr grid_guard(grid);
        covpath_plan* plan = nullptr;
        check(covpath_plan_load(sim_path.c_str(), &plan), "simulate load path");
        return cmd_simulate(grid_guard, PlanPtr(plan), mission_flags, sim_log, sim_report,
                            sim_json);
    }

    if (bench->parsed())
        return cmd_bench(parse_int_list(bench_sizes), parse_int_list(bench_counts),
                         bench_iters_read, bench_iters_plan, bench_seed, bench_json);

    if (all->parsed()) {
        double sx = 0, sy = 0;
        if (!parse_pair(all_start, sx, sy)) {
            std::cerr << "covpath: --start expects x,y\n";
            return static_cast<int>(COVPATH_ERR_INVALID_ARGUMENT);
        }
        std::filesystem::create_directories(all_dir);
        const std::filesystem::path dir(all_dir);

        GridPtr grid;
        if (!all_map.empty()) {
            if (all_meta.empty()) {
                std::cerr << "covpath: --map needs --meta\n";
                return static_cast<int>(COVPATH_ERR_INVALID_ARGUMENT);
            }
            covpath_grid* g = nullptr;
            check(covpath_grid_load(all_map.c_str(), all_meta.c_str(), &g), "run-all load");
            grid.reset(g);
        } else {
            covpath_grid* g = nullptr;
            check(covpath_grid_generate(all_shape.c_str(), all_width, all_height, all_resolution,
                                        all_mission.seed, &g),
                  "run-all gen-map");
            grid.reset(g);
            check(covpath_grid_save(g, "map", dir.string().c_str()), "run-all save map");
        }

        const covpath_reader_params rparams = all_reader.params();
        covpath_waypoints* wps = nullptr;
        const std::string stages_dir = (dir / "stages").string();
        check(covpath_read_map(grid.get(), &rparams,
                               all_stages ? stages_dir.c_str() : nullptr, &wps),
              "run-all read-map");
        WaypointsPtr wps_guard(wps);
        check(covpath_waypoints_save(wps, (dir / "waypoints.txt").string().c_str()),
              "run-all waypoints");
        std::cout << "waypoints: " << covpath_waypoints_count(wps) << "\n";

        const int rc = cmd_plan(wps_guard, all_spacing, sx, sy, all_components,
                                (dir / "path.txt").string().c_str(),
                                (dir / "graph.txt").string().c_str(), false);
        if (rc != 0) return rc;

        covpath_plan* plan = nullptr;
        check(covpath_plan_load((dir / "path.txt").string().c_str(), &plan), "run-all path");
        return cmd_simulate(grid, PlanPtr(plan), all_mission, (dir / "run.log").string(),
                            (dir / "report.txt").string(), all_json);
    }

    return 0;
}
