#include "covpath/covpath.h"

#include <cmath>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "covpath/errors.hpp"
#include "covpath/fsm_navigator.hpp"
#include "covpath/map_io.hpp"
#include "covpath/map_reader.hpp"
#include "covpath/path_planner.hpp"
#include "covpath/sim_world.hpp"
#include "covpath/waypoint_graph.hpp"

using namespace covpath;

struct covpath_grid {
    OccupancyGrid grid;
};
struct covpath_waypoints {
    WaypointSet set;
};
struct covpath_graph {
    WaypointGraph graph;
};
struct covpath_plan {
    PlannedPath path;
};
struct covpath_runlog {
    RunLog log;
    MissionMetrics metrics;
};

namespace {

thread_local std::string g_last_error;

covpath_status fail(covpath_status status, const char* what) {
    g_last_error = what != nullptr ? what : "";
    return status;
}

// Run a fallible body, mapping the exception family onto status codes.
template <typename Fn>
covpath_status guarded(Fn&& fn) {
    try {
        fn();
        return COVPATH_OK;
    } catch (const InvalidArgumentError& e) {
        return fail(COVPATH_ERR_INVALID_ARGUMENT, e.what());
    } catch (const IoError& e) {
        return fail(COVPATH_ERR_IO, e.what());
    } catch (const FormatError& e) {
        return fail(COVPATH_ERR_FORMAT, e.what());
    } catch (const SchemaError& e) {
        return fail(COVPATH_ERR_SCHEMA, e.what());
    } catch (const EmptyMapError& e) {
        return fail(COVPATH_ERR_EMPTY_MAP, e.what());
    } catch (const EmptySkeletonError& e) {
        return fail(COVPATH_ERR_EMPTY_SKELETON, e.what());
    } catch (const NoPathError& e) {
        return fail(COVPATH_ERR_NO_PATH, e.what());
    } catch (const RejectedEventError& e) {
        return fail(COVPATH_ERR_REJECTED_EVENT, e.what());
    } catch (const SimFaultError& e) {
        return fail(COVPATH_ERR_SIM_FAULT, e.what());
    } catch (const ValidationError& e) {
        return fail(COVPATH_ERR_VALIDATION, e.what());
    } catch (const std::bad_alloc&) {
        return fail(COVPATH_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(COVPATH_ERR_INTERNAL, e.what());
    }
}

covpath_status require(bool ok, const char* what) {
    return ok ? COVPATH_OK : fail(COVPATH_ERR_INVALID_ARGUMENT, what);
}

}  // namespace

extern "C" {

const char* covpath_status_name(covpath_status status) {
    switch (status) {
        case COVPATH_OK: return "ok";
        case COVPATH_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case COVPATH_ERR_IO: return "io_error";
        case COVPATH_ERR_FORMAT: return "format_error";
        case COVPATH_ERR_VALIDATION: return "validation_error";
        case COVPATH_ERR_SCHEMA: return "schema_error";
        case COVPATH_ERR_EMPTY_MAP: return "empty_map";
        case COVPATH_ERR_EMPTY_SKELETON: return "empty_skeleton";
        case COVPATH_ERR_NO_PATH: return "no_path";
        case COVPATH_ERR_REJECTED_EVENT: return "rejected_event";
        case COVPATH_ERR_SIM_FAULT: return "sim_fault";
        case COVPATH_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* covpath_last_error(void) { return g_last_error.c_str(); }

const char* covpath_version(void) { return "0.1.0"; }

/* ------------------------------------------------------------------ grid */

covpath_status covpath_grid_load(const char* pgm_path, const char* meta_path,
                                 covpath_grid** out) {
    if (auto s = require(pgm_path && meta_path && out, "null argument")) return s;
    return guarded([&] { *out = new covpath_grid{load_map(pgm_path, meta_path)}; });
}

covpath_status covpath_grid_generate(const char* shape, int width, int height, double resolution,
                                     uint64_t seed, covpath_grid** out) {
    if (auto s = require(shape && out, "null argument")) return s;
    return guarded([&] {
        const auto parsed = parse_map_shape(shape);
        if (!parsed)
            throw InvalidArgumentError(std::string("unknown map shape: '") + shape +
                                       "' (expected l-room, corridor, annulus or random-rects)");
        *out = new covpath_grid{generate_synthetic_map(*parsed, width, height, resolution, seed)};
    });
}

covpath_status covpath_grid_save(const covpath_grid* grid, const char* stage_name,
                                 const char* out_dir) {
    if (auto s = require(grid && stage_name && out_dir, "null argument")) return s;
    return guarded([&] { save_stage(grid->grid, stage_name, out_dir); });
}

void covpath_grid_free(covpath_grid* grid) { delete grid; }

int covpath_grid_width(const covpath_grid* grid) { return grid->grid.width(); }
int covpath_grid_height(const covpath_grid* grid) { return grid->grid.height(); }
double covpath_grid_resolution(const covpath_grid* grid) { return grid->grid.resolution(); }

void covpath_grid_origin(const covpath_grid* grid, double* x, double* y) {
    if (x) *x = grid->grid.origin().x;
    if (y) *y = grid->grid.origin().y;
}

const uint8_t* covpath_grid_cells(const covpath_grid* grid) {
    return grid->grid.cells().data();
}

/* ------------------------------------------------------------ map reader */

void covpath_reader_params_init(covpath_reader_params* params) {
    if (!params) return;
    params->sigma = 3;
    params->kappa = 128;
    params->erosion_k = 10;
    params->axis_order = 0;
}

covpath_status covpath_read_map(const covpath_grid* grid, const covpath_reader_params* params,
                                const char* stages_dir, covpath_waypoints** out) {
    if (auto s = require(grid && params && out, "null argument")) return s;
    return guarded([&] {
        const ReaderParams rp{params->sigma, params->kappa, params->erosion_k};
        const AxisOrder axis = params->axis_order == 0 ? AxisOrder::RowCol : AxisOrder::ColRow;
        std::optional<std::filesystem::path> dir;
        if (stages_dir) dir = stages_dir;
        *out = new covpath_waypoints{read_map(grid->grid, rp, axis, dir)};
    });
}

size_t covpath_waypoints_count(const covpath_waypoints* wps) { return wps->set.points.size(); }

void covpath_waypoints_get(const covpath_waypoints* wps, size_t i, double* x, double* y) {
    if (x) *x = wps->set.points[i].x;
    if (y) *y = wps->set.points[i].y;
}

double covpath_waypoints_resolution(const covpath_waypoints* wps) {
    return wps->set.resolution;
}

covpath_status covpath_waypoints_save(const covpath_waypoints* wps, const char* path) {
    if (auto s = require(wps && path, "null argument")) return s;
    return guarded([&] { save_waypoints(wps->set, path); });
}

covpath_status covpath_waypoints_load(const char* path, covpath_waypoints** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new covpath_waypoints{load_waypoints(path)}; });
}

covpath_status covpath_waypoints_synthetic(size_t count, double resolution,
                                           covpath_waypoints** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    return guarded([&] { *out = new covpath_waypoints{make_comb_waypoints(count, resolution)}; });
}

void covpath_waypoints_free(covpath_waypoints* wps) { delete wps; }

/* ----------------------------------------------------------------- graph */

covpath_status covpath_graph_build(const covpath_waypoints* wps, covpath_graph** out) {
    if (auto s = require(wps && out, "null argument")) return s;
    return guarded([&] { *out = new covpath_graph{WaypointGraph::build(wps->set)}; });
}

size_t covpath_graph_vertex_count(const covpath_graph* graph) {
    return graph->graph.vertex_count();
}
size_t covpath_graph_edge_count(const covpath_graph* graph) { return graph->graph.edge_count(); }
size_t covpath_graph_leaf_count(const covpath_graph* graph) {
    return graph->graph.find_leaves().size();
}
size_t covpath_graph_component_count(const covpath_graph* graph) {
    return graph->graph.component_count();
}

covpath_status covpath_graph_export(const covpath_graph* graph, const char* path) {
    if (auto s = require(graph && path, "null argument")) return s;
    return guarded([&] { graph->graph.export_edge_list(path); });
}

void covpath_graph_free(covpath_graph* graph) { delete graph; }

/* --------------------------------------------------------------- planner */

void covpath_plan_params_init(covpath_plan_params* params) {
    if (!params) return;
    params->spacing = 1.0;
    params->start_x = 0.0;
    params->start_y = 0.0;
    params->all_components = 0;
}

covpath_status covpath_plan_create(const covpath_graph* graph, const covpath_plan_params* params,
                                   covpath_plan** out) {
    if (auto s = require(graph && params && out, "null argument")) return s;
    return guarded([&] {
        const PlannerParams pp{params->spacing,
                               {params->start_x, params->start_y},
                               params->all_components != 0};
        *out = new covpath_plan{plan(graph->graph, pp)};
    });
}

size_t covpath_plan_full_count(const covpath_plan* plan) { return plan->path.full_path.size(); }
size_t covpath_plan_spliced_count(const covpath_plan* plan) {
    return plan->path.spliced_path.size();
}
int covpath_plan_stride(const covpath_plan* plan) { return plan->path.stride; }

void covpath_plan_spliced_get(const covpath_plan* plan, size_t i, double* x, double* y) {
    if (x) *x = plan->path.spliced_path[i].x;
    if (y) *y = plan->path.spliced_path[i].y;
}

double covpath_plan_total_length(const covpath_plan* plan) {
    return path_metrics(plan->path).total_length;
}

void covpath_plan_spacing_stats(const covpath_plan* plan, double* mean, double* min,
                                double* max) {
    const PathSummary s = path_metrics(plan->path);
    const double nan = std::nan("");
    if (mean) *mean = s.mean_spacing.value_or(nan);
    if (min) *min = s.min_spacing.value_or(nan);
    if (max) *max = s.max_spacing.value_or(nan);
}

size_t covpath_plan_planned_components(const covpath_plan* plan) {
    return plan->path.planned_components;
}
size_t covpath_plan_total_components(const covpath_plan* plan) {
    return plan->path.total_components;
}

covpath_status covpath_plan_save(const covpath_plan* plan, const char* path) {
    if (auto s = require(plan && path, "null argument")) return s;
    return guarded([&] { save_path(plan->path, path); });
}

covpath_status covpath_plan_load(const char* path, covpath_plan** out) {
    if (auto s = require(path && out, "null argument")) return s;
    return guarded([&] { *out = new covpath_plan{load_path(path)}; });
}

void covpath_plan_free(covpath_plan* plan) { delete plan; }

/* --------------------------------------------------------------- mission */

void covpath_mission_params_init(covpath_mission_params* params) {
    if (!params) return;
    std::memset(params, 0, sizeof(*params));
    params->tol_pos = 0.05;
    params->tol_yaw = 0.08;
    params->timeout = 10.0;
    params->max_vx = 1.0;
    params->max_vy = 0.5;
    params->max_wz = 0.8;
    params->dt = 0.01;
    params->robot_radius = 0.35;
    params->drift_rate = 0.0;
    params->seed = 0;
    params->max_retries = 5;
    params->assist_delay = 1.0;
    params->scan_orientations = 0;
    params->scan_gestures = nullptr;
    params->interrupts = nullptr;
    params->interrupt_count = 0;
}

covpath_status covpath_mission_run(const covpath_grid* grid, const covpath_plan* plan,
                                   const covpath_mission_params* params, covpath_runlog** out) {
    if (auto s = require(grid && plan && params && out, "null argument")) return s;
    return guarded([&] {
        SimConfig sim;
        sim.max_vx = params->max_vx;
        sim.max_vy = params->max_vy;
        sim.max_wz = params->max_wz;
        sim.dt = params->dt;
        sim.robot_radius = params->robot_radius;
        sim.drift_rate = params->drift_rate;
        sim.seed = params->seed;

        MissionConfig mission;
        mission.tol = {params->tol_pos, params->tol_yaw, params->timeout};
        mission.max_retries = params->max_retries;
        mission.assist_delay = params->assist_delay;
        if (params->scan_orientations > 0) {
            ScanParams scan;
            scan.orientations = params->scan_orientations;
            if (params->scan_gestures) {
                std::stringstream ss(params->scan_gestures);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) scan.gestures.push_back(item);
            }
            mission.scan = scan;
        }
        for (size_t i = 0; i < params->interrupt_count; ++i)
            mission.interrupts.push_back(params->interrupts[i]);

        const Pose2D start{plan->path.start.x, plan->path.start.y, 0.0};
        World world(grid->grid, sim, start, plan->path.axis);
        RunLog log = run_mission(world, plan->path, mission);
        auto metrics = mission_metrics(log);
        *out = new covpath_runlog{std::move(log), std::move(metrics)};
    });
}

size_t covpath_runlog_waypoint_count(const covpath_runlog* log) {
    return log->log.waypoints.size();
}
size_t covpath_runlog_reached_count(const covpath_runlog* log) { return log->metrics.reached; }
double covpath_runlog_reachability(const covpath_runlog* log) {
    return log->metrics.reachability_pct;
}
double covpath_runlog_total_time(const covpath_runlog* log) { return log->metrics.total_time; }
double covpath_runlog_median_waypoint_time(const covpath_runlog* log) {
    return log->metrics.median_waypoint_time;
}

covpath_status covpath_runlog_waypoint(const covpath_runlog* log, size_t i, double* seconds,
                                       int* reached, int* assisted, int* timeouts) {
    if (auto s = require(log != nullptr, "null argument")) return s;
    if (i >= log->log.waypoints.size())
        return fail(COVPATH_ERR_INVALID_ARGUMENT, "waypoint index out of range");
    const WaypointOutcome& w = log->log.waypoints[i];
    if (seconds) *seconds = w.duration();
    if (reached) *reached = w.reached ? 1 : 0;
    if (assisted) *assisted = w.assisted ? 1 : 0;
    if (timeouts) *timeouts = w.timeouts;
    return COVPATH_OK;
}

size_t covpath_runlog_capture_count(const covpath_runlog* log) {
    return log->log.captures.size();
}

int covpath_runlog_aborted(const covpath_runlog* log) { return log->log.aborted ? 1 : 0; }

covpath_status covpath_runlog_save(const covpath_runlog* log, const char* path) {
    if (auto s = require(log && path, "null argument")) return s;
    return guarded([&] { save_runlog(log->log, path); });
}

covpath_status covpath_runlog_report(const covpath_runlog* log, char** out) {
    if (auto s = require(log && out, "null argument")) return s;
    return guarded([&] {
        const std::string report = format_report(log->metrics);
        char* buf = new char[report.size() + 1];
        std::memcpy(buf, report.c_str(), report.size() + 1);
        *out = buf;
    });
}

void covpath_runlog_free(covpath_runlog* log) { delete log; }

void covpath_string_free(char* s) { delete[] s; }

}  // extern "C"
