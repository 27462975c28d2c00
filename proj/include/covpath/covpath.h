/* covpath: coverage path planning from occupancy-grid maps.
 *
 * C API of the shared library. All objects are opaque handles created and
 * released through these functions; every fallible call returns a
 * covpath_status and covpath_last_error() carries the detail message of the
 * most recent failure on the calling thread.
 */
#ifndef COVPATH_H
#define COVPATH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COVPATH_API __declspec(dllexport)
#else
#define COVPATH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum covpath_status {
    COVPATH_OK = 0,
    COVPATH_ERR_INVALID_ARGUMENT = 1,
    COVPATH_ERR_IO = 2,
    COVPATH_ERR_FORMAT = 3,
    COVPATH_ERR_VALIDATION = 4,
    COVPATH_ERR_SCHEMA = 5,
    COVPATH_ERR_EMPTY_MAP = 6,
    COVPATH_ERR_EMPTY_SKELETON = 7,
    COVPATH_ERR_NO_PATH = 8,
    COVPATH_ERR_REJECTED_EVENT = 9,
    COVPATH_ERR_SIM_FAULT = 10,
    COVPATH_ERR_INTERNAL = 11
} covpath_status;

COVPATH_API const char* covpath_status_name(covpath_status status);
COVPATH_API const char* covpath_last_error(void);
COVPATH_API const char* covpath_version(void);

/* ------------------------------------------------------------------ grid */

typedef struct covpath_grid covpath_grid;

COVPATH_API covpath_status covpath_grid_load(const char* pgm_path, const char* meta_path,
                                             covpath_grid** out);
/* shape: "l-room" | "corridor" | "annulus" | "random-rects" */
COVPATH_API covpath_status covpath_grid_generate(const char* shape, int width, int height,
                                                 double resolution, uint64_t seed,
                                                 covpath_grid** out);
/* Writes <stage_name>.pgm and <stage_name>.meta into out_dir. */
COVPATH_API covpath_status covpath_grid_save(const covpath_grid* grid, const char* stage_name,
                                             const char* out_dir);
COVPATH_API void covpath_grid_free(covpath_grid* grid);

COVPATH_API int covpath_grid_width(const covpath_grid* grid);
COVPATH_API int covpath_grid_height(const covpath_grid* grid);
COVPATH_API double covpath_grid_resolution(const covpath_grid* grid);
COVPATH_API void covpath_grid_origin(const covpath_grid* grid, double* x, double* y);
/* Row-major cells, height*width bytes, valid while the handle lives. */
COVPATH_API const uint8_t* covpath_grid_cells(const covpath_grid* grid);

/* ------------------------------------------------------------ map reader */

typedef struct covpath_waypoints covpath_waypoints;

typedef struct covpath_reader_params {
    int sigma;      /* Gaussian stddev in pixels, >= 1 */
    int kappa;      /* binarization threshold, 0..255 */
    int erosion_k;  /* structuring element side in pixels, >= 1 */
    int axis_order; /* 0: world x = row, world y = col (default); 1: swapped */
} covpath_reader_params;

COVPATH_API void covpath_reader_params_init(covpath_reader_params* params);

/* stages_dir NULL skips the per-stage dumps. */
COVPATH_API covpath_status covpath_read_map(const covpath_grid* grid,
                                            const covpath_reader_params* params,
                                            const char* stages_dir, covpath_waypoints** out);

COVPATH_API size_t covpath_waypoints_count(const covpath_waypoints* wps);
COVPATH_API void covpath_waypoints_get(const covpath_waypoints* wps, size_t i, double* x,
                                       double* y);
COVPATH_API double covpath_waypoints_resolution(const covpath_waypoints* wps);
COVPATH_API covpath_status covpath_waypoints_save(const covpath_waypoints* wps, const char* path);
COVPATH_API covpath_status covpath_waypoints_load(const char* path, covpath_waypoints** out);
/* Deterministic comb-shaped waypoint set for planner benchmarks. */
COVPATH_API covpath_status covpath_waypoints_synthetic(size_t count, double resolution,
                                                       covpath_waypoints** out);
COVPATH_API void covpath_waypoints_free(covpath_waypoints* wps);

/* ----------------------------------------------------------------- graph */

typedef struct covpath_graph covpath_graph;

COVPATH_API covpath_status covpath_graph_build(const covpath_waypoints* wps, covpath_graph** out);
COVPATH_API size_t covpath_graph_vertex_count(const covpath_graph* graph);
COVPATH_API size_t covpath_graph_edge_count(const covpath_graph* graph);
COVPATH_API size_t covpath_graph_leaf_count(const covpath_graph* graph);
COVPATH_API size_t covpath_graph_component_count(const covpath_graph* graph);
COVPATH_API covpath_status covpath_graph_export(const covpath_graph* graph, const char* path);
COVPATH_API void covpath_graph_free(covpath_graph* graph);

/* --------------------------------------------------------------- planner */

typedef struct covpath_plan covpath_plan;

typedef struct covpath_plan_params {
    double spacing; /* D in meters, >= map resolution */
    double start_x;
    double start_y;
    int all_components; /* nonzero: chain disconnected components */
} covpath_plan_params;

COVPATH_API void covpath_plan_params_init(covpath_plan_params* params);

COVPATH_API covpath_status covpath_plan_create(const covpath_graph* graph,
                                               const covpath_plan_params* params,
                                               covpath_plan** out);
COVPATH_API size_t covpath_plan_full_count(const covpath_plan* plan);
COVPATH_API size_t covpath_plan_spliced_count(const covpath_plan* plan);
COVPATH_API int covpath_plan_stride(const covpath_plan* plan);
COVPATH_API void covpath_plan_spliced_get(const covpath_plan* plan, size_t i, double* x,
                                          double* y);
COVPATH_API double covpath_plan_total_length(const covpath_plan* plan);
/* Spacing stats of the spliced path; absent values come back as NaN. */
COVPATH_API void covpath_plan_spacing_stats(const covpath_plan* plan, double* mean, double* min,
                                            double* max);
COVPATH_API size_t covpath_plan_planned_components(const covpath_plan* plan);
COVPATH_API size_t covpath_plan_total_components(const covpath_plan* plan);
COVPATH_API covpath_status covpath_plan_save(const covpath_plan* plan, const char* path);
COVPATH_API covpath_status covpath_plan_load(const char* path, covpath_plan** out);
COVPATH_API void covpath_plan_free(covpath_plan* plan);

/* --------------------------------------------------------------- mission */

typedef struct covpath_runlog covpath_runlog;

typedef struct covpath_mission_params {
    double tol_pos;     /* m */
    double tol_yaw;     /* rad */
    double timeout;     /* s per navigation attempt */
    double max_vx;      /* m/s */
    double max_vy;      /* m/s */
    double max_wz;      /* rad/s */
    double dt;          /* s */
    double robot_radius; /* m */
    double drift_rate;  /* rad/sqrt(s); 0 disables drift */
    uint64_t seed;
    int max_retries;
    double assist_delay; /* s of operator driving on ManualControl */
    int scan_orientations;      /* 0 disables scanning */
    const char* scan_gestures;  /* comma-separated codes; NULL with scanning off */
    const double* interrupts;   /* mission times of operator takeovers */
    size_t interrupt_count;
} covpath_mission_params;

COVPATH_API void covpath_mission_params_init(covpath_mission_params* params);

COVPATH_API covpath_status covpath_mission_run(const covpath_grid* grid,
                                               const covpath_plan* plan,
                                               const covpath_mission_params* params,
                                               covpath_runlog** out);

COVPATH_API size_t covpath_runlog_waypoint_count(const covpath_runlog* log);
COVPATH_API size_t covpath_runlog_reached_count(const covpath_runlog* log);
COVPATH_API double covpath_runlog_reachability(const covpath_runlog* log); /* percent */
COVPATH_API double covpath_runlog_total_time(const covpath_runlog* log);
COVPATH_API double covpath_runlog_median_waypoint_time(const covpath_runlog* log);
COVPATH_API covpath_status covpath_runlog_waypoint(const covpath_runlog* log, size_t i,
                                                   double* seconds, int* reached, int* assisted,
                                                   int* timeouts);
COVPATH_API size_t covpath_runlog_capture_count(const covpath_runlog* log);
/* Nonzero when the mission aborted on a simulator fault; the log is partial. */
COVPATH_API int covpath_runlog_aborted(const covpath_runlog* log);
COVPATH_API covpath_status covpath_runlog_save(const covpath_runlog* log, const char* path);
/* Table-style text report; free with covpath_string_free. */
COVPATH_API covpath_status covpath_runlog_report(const covpath_runlog* log, char** out);
COVPATH_API void covpath_runlog_free(covpath_runlog* log);

COVPATH_API void covpath_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* COVPATH_H */
