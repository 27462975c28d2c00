#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "covpath/waypoint_graph.hpp"

namespace covpath {

struct PlannerParams {
    double waypoint_spacing{1.0};  // D, meters; must be >= map resolution
    Vec2 start_position{};         // robot position when planning
    bool chain_components{false};  // hop across disconnected components

    void validate(double resolution) const;
};

struct PlannedPath {
    std::vector<std::size_t> full_path;  // P: vertex indices, no repeats
    std::vector<Vec2> spliced_path;      // P*: every stride-th point of P
    int stride{1};                       // round(D / R), at least 1
    double spacing{1.0};                 // D
    double resolution{0.1};              // R
    Vec2 start{};
    AxisOrder axis{AxisOrder::RowCol};
    // Coverage reporting for cyclic or disconnected inputs.
    std::size_t planned_components{0};
    std::size_t total_components{0};
    double vertex_coverage{1.0};  // |P| over reachable vertex count target
};

/// The candidate minimizing straight-line distance to position; ties go to
/// the lowest vertex index. Throws InvalidArgumentError on an empty set.
std::size_t find_nearest_leaf(Vec2 position, std::span<const std::size_t> candidates,
                              const WaypointGraph& graph);

/// Greedy nearest-leaf traversal stitched with shortest paths, then spliced
/// at stride round(D/R). Leafless components fall back to nearest-vertex
/// stitching so a pure cycle is traversed once.
PlannedPath plan(const WaypointGraph& graph, const PlannerParams& params);

/// Re-splice an existing full path at a new stride divisor D/R.
PlannedPath splice(const WaypointGraph& graph, PlannedPath path, double stride_divisor);

struct PathSummary {
    std::size_t count{0};
    double total_length{0.0};
    std::optional<double> mean_spacing;
    std::optional<double> min_spacing;
    std::optional<double> max_spacing;
};

/// Count, total length and consecutive-spacing stats of the spliced path.
PathSummary path_metrics(const PlannedPath& path);

void save_path(const PlannedPath& path, const std::filesystem::path& file);
/// Loads the spliced waypoints plus header geometry; full_path stays empty.
PlannedPath load_path(const std::filesystem::path& file);

}  // namespace covpath
