#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "covpath/map_reader.hpp"

namespace covpath {

/// Exact path length over a pixel-adjacency graph: every edge is either one
/// resolution step (orthogonal) or sqrt(2) of it (diagonal), so a length is
/// the integer pair (orthogonal, diagonal) and ties compare exactly.
struct PathCost {
    std::int64_t orthogonal{0};
    std::int64_t diagonal{0};

    double meters(double resolution) const;

    bool operator==(const PathCost&) const = default;
};

PathCost operator+(PathCost a, PathCost b);
/// Exact comparison of orthogonal + diagonal*sqrt(2).
bool cost_less(PathCost a, PathCost b);

/// Undirected graph over waypoints: an edge joins two waypoints whose source
/// pixels are 8-neighbors; the weight is the Euclidean world distance
/// (resolution or resolution*sqrt(2)).
class WaypointGraph {
  public:
    struct Neighbor {
        std::size_t index;
        bool diagonal;
    };

    static WaypointGraph build(const WaypointSet& waypoints);

    std::size_t vertex_count() const { return points_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    double resolution() const { return resolution_; }
    AxisOrder axis() const { return axis_; }

    Vec2 point(std::size_t v) const { return points_[v]; }
    PixelCoord pixel(std::size_t v) const { return pixels_[v]; }
    std::span<const Neighbor> neighbors(std::size_t v) const { return adjacency_[v]; }
    std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
    double edge_weight(const Neighbor& n) const;

    /// All vertices of degree <= 1. Isolated vertices count as leaves so
    /// that stray skeleton pixels are still visited.
    std::vector<std::size_t> find_leaves() const;

    /// Dijkstra over exact costs, endpoints included. Among equal-cost paths
    /// returns the one whose vertex sequence reads lexicographically smallest
    /// from the lower-indexed endpoint, which makes the result symmetric
    /// under reversal. Throws NoPathError naming both components when the
    /// target is unreachable.
    std::vector<std::size_t> shortest_path(std::size_t source, std::size_t target) const;

    PathCost path_cost(std::span<const std::size_t> path) const;
    double path_length(std::span<const std::size_t> path) const;

    /// Component id per vertex, ids assigned in ascending order of the
    /// smallest vertex index in each component.
    std::vector<std::size_t> component_labels() const;
    std::size_t component_count() const;

    /// Edge list with a vertex table header, for plotting and debugging.
    void export_edge_list(const std::filesystem::path& path) const;

  private:
    std::vector<Vec2> points_;
    std::vector<PixelCoord> pixels_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::size_t edge_count_{0};
    double resolution_{0.1};
    AxisOrder axis_{AxisOrder::RowCol};
};

}  // namespace covpath
