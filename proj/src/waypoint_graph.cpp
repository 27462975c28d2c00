#include "covpath/waypoint_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <unordered_map>

#include "covpath/errors.hpp"

namespace covpath {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::uint64_t pack_pixel(PixelCoord p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.row)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.col));
}

}  // namespace

double PathCost::meters(double resolution) const {
    return resolution * (static_cast<double>(orthogonal) + kSqrt2 * static_cast<double>(diagonal));
}

PathCost operator+(PathCost a, PathCost b) {
    return {a.orthogonal + b.orthogonal, a.diagonal + b.diagonal};
}

bool cost_less(PathCost a, PathCost b) {
    // Compare da + db*sqrt(2) against zero with integer arithmetic; sqrt(2)
    // is irrational, so mixed-sign cases never tie.
    const std::int64_t da = a.orthogonal - b.orthogonal;
    const std::int64_t db = a.diagonal - b.diagonal;
    if (da == 0 && db == 0) return false;
    if (da <= 0 && db <= 0) return true;
    if (da >= 0 && db >= 0) return false;
    if (da < 0) return da * da > 2 * db * db;  // da < 0 < db
    return da * da < 2 * db * db;              // db < 0 < da
}

WaypointGraph WaypointGraph::build(const WaypointSet& waypoints) {
    if (waypoints.points.size() != waypoints.source_pixels.size())
        throw ValidationError("waypoint set must carry one source pixel per point");
    if (!(waypoints.resolution > 0.0)) throw ValidationError("waypoint resolution must be > 0");

    WaypointGraph g;
    g.points_ = waypoints.points;
    g.pixels_ = waypoints.source_pixels;
    g.resolution_ = waypoints.resolution;
    g.axis_ = waypoints.axis;

    std::unordered_map<std::uint64_t, std::size_t> by_pixel;
    by_pixel.reserve(g.pixels_.size() * 2);
    for (std::size_t v = 0; v < g.pixels_.size(); ++v) {
        const auto [it, inserted] = by_pixel.emplace(pack_pixel(g.pixels_[v]), v);
        if (!inserted)
            throw ValidationError("duplicate source pixel (" +
                                  std::to_string(g.pixels_[v].row) + ", " +
                                  std::to_string(g.pixels_[v].col) + ") at waypoints " +
                                  std::to_string(it->second) + " and " + std::to_string(v));
    }

    g.adjacency_.resize(g.pixels_.size());
    for (std::size_t v = 0; v < g.pixels_.size(); ++v) {
        const PixelCoord p = g.pixels_[v];
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                const auto it = by_pixel.find(pack_pixel({p.row + dr, p.col + dc}));
                if (it == by_pixel.end()) continue;
                g.adjacency_[v].push_back({it->second, dr != 0 && dc != 0});
            }
        }
        std::sort(g.adjacency_[v].begin(), g.adjacency_[v].end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
        g.edge_count_ += g.adjacency_[v].size();
    }
    g.edge_count_ /= 2;
    return g;
}

double WaypointGraph::edge_weight(const Neighbor& n) const {
    return n.diagonal ? resolution_ * kSqrt2 : resolution_;
}

std::vector<std::size_t> WaypointGraph::find_leaves() const {
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < vertex_count(); ++v)
        if (degree(v) <= 1) leaves.push_back(v);
    return leaves;
}

std::vector<std::size_t> WaypointGraph::component_labels() const {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> labels(vertex_count(), unset);
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < vertex_count(); ++v) {
        if (labels[v] != unset) continue;
        labels[v] = next;
        stack.assign(1, v);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            for (const Neighbor& n : adjacency_[cur]) {
                if (labels[n.index] != unset) continue;
                labels[n.index] = next;
                stack.push_back(n.index);
            }
        }
        ++next;
    }
    return labels;
}

std::size_t WaypointGraph::component_count() const {
    const auto labels = component_labels();
    std::size_t n = 0;
    for (const std::size_t l : labels) n = std::max(n, l + 1);
    return n;
}

std::vector<std::size_t> WaypointGraph::shortest_path(std::size_t source,
                                                      std::size_t target) const {
    if (source >= vertex_count() || target >= vertex_count())
        throw InvalidArgumentError("shortest_path endpoint out of range");
    if (source == target) return {source};

    const std::size_t lo = std::min(source, target);
    const std::size_t hi = std::max(source, target);

    // Dijkstra rooted at the higher-indexed endpoint so the greedy forward
    // walk below reads the path from the lower one.
    struct QueueEntry {
        PathCost cost;
        std::size_t vertex;
    };
    auto later = [](const QueueEntry& a, const QueueEntry& b) {
        if (cost_less(b.cost, a.cost)) return true;
        if (cost_less(a.cost, b.cost)) return false;
        return a.vertex > b.vertex;
    };
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(later)> queue(later);
    std::vector<PathCost> dist(vertex_count());
    std::vector<char> settled(vertex_count(), 0);
    std::vector<char> seen(vertex_count(), 0);

    dist[hi] = {};
    seen[hi] = 1;
    queue.push({{}, hi});
    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        if (settled[top.vertex]) continue;
        settled[top.vertex] = 1;
        for (const Neighbor& n : adjacency_[top.vertex]) {
            PathCost cand = top.cost;
            (n.diagonal ? cand.diagonal : cand.orthogonal) += 1;
            if (!seen[n.index] || cost_less(cand, dist[n.index])) {
                seen[n.index] = 1;
                dist[n.index] = cand;
                queue.push({cand, n.index});
            }
        }
    }

    if (!seen[lo]) {
        const auto labels = component_labels();
        std::vector<std::size_t> sizes(component_count(), 0);
        for (const std::size_t l : labels) ++sizes[l];
        throw NoPathError("no path from vertex " + std::to_string(source) + " (component " +
                          std::to_string(labels[source]) + ", " +
                          std::to_string(sizes[labels[source]]) + " vertices) to vertex " +
                          std::to_string(target) + " (component " +
                          std::to_string(labels[target]) + ", " +
                          std::to_string(sizes[labels[target]]) + " vertices)");
    }

    // Greedy descent along exact-cost-consistent edges; neighbors are sorted
    // by index, so the first hit gives the lexicographically smallest
    // sequence as read from the lower endpoint.
    std::vector<std::size_t> path{lo};
    std::size_t cur = lo;
    while (cur != hi) {
        bool advanced = false;
        for (const Neighbor& n : adjacency_[cur]) {
            if (!seen[n.index]) continue;
            PathCost via = dist[n.index];
            (n.diagonal ? via.diagonal : via.orthogonal) += 1;
            if (via == dist[cur]) {
                path.push_back(n.index);
                cur = n.index;
                advanced = true;
                break;
            }
        }
        if (!advanced) throw Error("internal: shortest-path reconstruction stalled");
    }
    if (source == hi) std::reverse(path.begin(), path.end());
    return path;
}

PathCost WaypointGraph::path_cost(std::span<const std::size_t> path) const {
    PathCost cost;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const auto& adj = adjacency_[path[i - 1]];
        const auto it = std::find_if(adj.begin(), adj.end(),
                                     [&](const Neighbor& n) { return n.index == path[i]; });
        if (it == adj.end())
            throw InvalidArgumentError("path_cost: vertices " + std::to_string(path[i - 1]) +
                                       " and " + std::to_string(path[i]) + " are not adjacent");
        (it->diagonal ? cost.diagonal : cost.orthogonal) += 1;
    }
    return cost;
}

double WaypointGraph::path_length(std::span<const std::size_t> path) const {
    return path_cost(path).meters(resolution_);
}

void WaypointGraph::export_edge_list(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write graph file: " + path.string());
    out << "vertices " << vertex_count() << "\n";
    for (std::size_t v = 0; v < vertex_count(); ++v)
        out << v << " " << points_[v].x << " " << points_[v].y << "\n";
    out << "edges " << edge_count_ << "\n";
    for (std::size_t v = 0; v < vertex_count(); ++v)
        for (const Neighbor& n : adjacency_[v])
            if (v < n.index) out << v << " " << n.index << " " << edge_weight(n) << "\n";
    if (!out) throw IoError("failed writing graph file: " + path.string());
}

}  // namespace covpath
