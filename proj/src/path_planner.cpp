#include "covpath/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "covpath/errors.hpp"

namespace covpath {

void PlannerParams::validate(double resolution) const {
    if (!(waypoint_spacing > 0.0))
        throw InvalidArgumentError("waypoint spacing must be positive");
    if (waypoint_spacing < resolution)
        throw InvalidArgumentError("waypoint spacing must be at least the map resolution");
}

std::size_t find_nearest_leaf(Vec2 position, std::span<const std::size_t> candidates,
                              const WaypointGraph& graph) {
    if (candidates.empty())
        throw InvalidArgumentError("find_nearest_leaf: candidate set is empty");
    std::size_t best = candidates.front();
    double best_d = distance(graph.point(best), position);
    for (const std::size_t v : candidates.subspan(1)) {
        const double d = distance(graph.point(v), position);
        if (d < best_d || (d == best_d && v < best)) {
            best = v;
            best_d = d;
        }
    }
    return best;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

PlannedPath plan(const WaypointGraph& graph, const PlannerParams& params) {
    params.validate(graph.resolution());

    PlannedPath out;
    out.spacing = params.waypoint_spacing;
    out.resolution = graph.resolution();
    out.start = params.start_position;
    out.axis = graph.axis();
    out.total_components = graph.component_count();
    if (graph.vertex_count() == 0) {
        out.stride = std::max(1, static_cast<int>(std::lround(out.spacing / out.resolution)));
        return out;
    }

    const auto labels = graph.component_labels();
    std::vector<std::size_t> candidates = graph.find_leaves();
    // A leafless graph is all cycles; fall back to stitching every vertex so
    // a pure cycle still gets traversed once.
    const bool vertex_mode = candidates.empty();
    if (vertex_mode) {
        candidates.resize(graph.vertex_count());
        for (std::size_t v = 0; v < candidates.size(); ++v) candidates[v] = v;
    }

    std::size_t current = find_nearest_leaf(params.start_position, candidates, graph);
    if (!params.chain_components) {
        const std::size_t home = labels[current];
        std::erase_if(candidates, [&](std::size_t v) { return labels[v] != home; });
    }

    std::vector<char> in_path(graph.vertex_count(), 0);
    std::vector<char> visited(graph.vertex_count(), 0);
    auto append = [&](std::size_t v) {
        if (in_path[v]) return;
        in_path[v] = 1;
        out.full_path.push_back(v);
        if (vertex_mode) visited[v] = 1;
    };

    std::vector<std::size_t> remaining;
    while (true) {
        visited[current] = 1;
        remaining.clear();
        for (const std::size_t v : candidates)
            if (!visited[v]) remaining.push_back(v);
        if (remaining.empty()) {
            append(current);
            break;
        }
        const std::size_t target = find_nearest_leaf(graph.point(current), remaining, graph);
        if (labels[target] != labels[current]) {
            // Chained mode: jump components; the navigator bridges the gap.
            append(current);
            current = target;
            continue;
        }
        for (const std::size_t v : graph.shortest_path(current, target)) append(v);
        current = target;
    }

    std::vector<char> planned_label(out.total_components, 0);
    for (const std::size_t v : out.full_path) planned_label[labels[v]] = 1;
    out.planned_components =
        static_cast<std::size_t>(std::count(planned_label.begin(), planned_label.end(), 1));
    out.vertex_coverage =
        static_cast<double>(out.full_path.size()) / static_cast<double>(graph.vertex_count());

    const double divisor = out.spacing / out.resolution;
    return splice(graph, std::move(out), divisor);
}

PlannedPath splice(const WaypointGraph& graph, PlannedPath path, double stride_divisor) {
    const int stride = std::max(1, static_cast<int>(std::lround(stride_divisor)));
    path.stride = stride;
    path.spliced_path.clear();
    if (path.full_path.empty()) return path;
    const std::size_t last = path.full_path.size() - 1;
    for (std::size_t k = 0;; ++k) {
        const std::size_t idx = k * static_cast<std::size_t>(stride);
        if (idx > last) break;
        path.spliced_path.push_back(graph.point(path.full_path[idx]));
    }
    return path;
}

PathSummary path_metrics(const PlannedPath& path) {
    PathSummary s;
    s.count = path.spliced_path.size();
    if (s.count < 2) return s;
    double total = 0.0, mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    for (std::size_t i = 1; i < path.spliced_path.size(); ++i) {
        const double d = distance(path.spliced_path[i - 1], path.spliced_path[i]);
        total += d;
        mn = std::min(mn, d);
        mx = std::max(mx, d);
    }
    s.total_length = total;
    s.mean_spacing = total / static_cast<double>(s.count - 1);
    s.min_spacing = mn;
    s.max_spacing = mx;
    return s;
}

void save_path(const PlannedPath& path, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write path file: " + file.string());
    out << "count=" << path.spliced_path.size() << " spacing=" << format_double(path.spacing)
        << " resolution=" << format_double(path.resolution)
        << " start_x=" << format_double(path.start.x)
        << " start_y=" << format_double(path.start.y) << " stride=" << path.stride
        << " full_count=" << path.full_path.size()
        << " axis=" << (path.axis == AxisOrder::RowCol ? "row-col" : "col-row") << "\n";
    for (const Vec2& p : path.spliced_path)
        out << format_double(p.x) << " " << format_double(p.y) << "\n";
    if (!out) throw IoError("failed writing path file: " + file.string());
}

PlannedPath load_path(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open path file: " + file.string());
    std::string header;
    if (!std::getline(in, header)) throw FormatError("path file is empty: " + file.string());

    PlannedPath path;
    std::size_t count = 0;
    bool have_count = false;
    std::istringstream hs(header);
    std::string token;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw FormatError("bad path header token: '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "count") {
                count = std::stoul(value);
                have_count = true;
            } else if (key == "spacing") {
                path.spacing = std::stod(value);
            } else if (key == "resolution") {
                path.resolution = std::stod(value);
            } else if (key == "start_x") {
                path.start.x = std::stod(value);
            } else if (key == "start_y") {
                path.start.y = std::stod(value);
            } else if (key == "stride") {
                path.stride = std::stoi(value);
            } else if (key == "axis") {
                if (value == "row-col")
                    path.axis = AxisOrder::RowCol;
                else if (value == "col-row")
                    path.axis = AxisOrder::ColRow;
                else
                    throw FormatError("unknown axis order: '" + value + "'");
            }
        } catch (const std::logic_error&) {
            throw FormatError("bad path header value: '" + token + "'");
        }
    }
    if (!have_count) throw FormatError("path header must carry count");

    double x = 0.0, y = 0.0;
    while (in >> x >> y) path.spliced_path.push_back({x, y});
    if (path.spliced_path.size() != count)
        throw FormatError("path count mismatch: header says " + std::to_string(count) +
                          ", file has " + std::to_string(path.spliced_path.size()));
    return path;
}

}  // namespace covpath
