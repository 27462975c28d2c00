#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

namespace covpath::oracle {

OccupancyGrid dense_gaussian(const OccupancyGrid& grid, int sigma) {
    const int radius = 3 * sigma;
    const int side = 2 * radius + 1;
    std::vector<double> kernel(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
    double total = 0.0;
    for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc) {
            const double w =
                std::exp(-0.5 * (static_cast<double>(dr) * dr + static_cast<double>(dc) * dc) /
                         (static_cast<double>(sigma) * sigma));
            kernel[static_cast<std::size_t>((dr + radius) * side + (dc + radius))] = w;
            total += w;
        }
    for (double& w : kernel) w /= total;

    auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
    OccupancyGrid out = grid;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j) {
            double acc = 0.0;
            for (int dr = -radius; dr <= radius; ++dr)
                for (int dc = -radius; dc <= radius; ++dc)
                    acc += kernel[static_cast<std::size_t>((dr + radius) * side +
                                                           (dc + radius))] *
                           static_cast<double>(
                               grid.at(clampi(i + dr, grid.height()), clampi(j + dc, grid.width())));
            out.at(i, j) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
        }
    return out;
}

OccupancyGrid naive_erode(const OccupancyGrid& grid, int erosion_k) {
    const int anchor = erosion_k / 2;
    OccupancyGrid out = grid;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j) {
            std::uint8_t m = 255;
            for (int dr = 0; dr < erosion_k; ++dr)
                for (int dc = 0; dc < erosion_k; ++dc) {
                    const int r = i - anchor + dr, c = j - anchor + dc;
                    m = std::min(m, grid.in_bounds(r, c) ? grid.at(r, c) : kOccupied);
                }
            out.at(i, j) = m;
        }
    return out;
}

OccupancyGrid classic_zhang_suen(const OccupancyGrid& grid) {
    std::set<std::pair<int, int>> img;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            if (grid.at(i, j) == kFree) img.insert({i, j});

    auto ring = [](std::pair<int, int> p) {
        const auto [r, c] = p;
        return std::array<std::pair<int, int>, 8>{{{r - 1, c},
                                                   {r - 1, c + 1},
                                                   {r, c + 1},
                                                   {r + 1, c + 1},
                                                   {r + 1, c},
                                                   {r + 1, c - 1},
                                                   {r, c - 1},
                                                   {r - 1, c - 1}}};
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int sub = 0; sub < 2; ++sub) {
            std::vector<std::pair<int, int>> flagged;
            for (const auto& p : img) {
                std::array<int, 8> n{};
                int b = 0;
                const auto neighbors = ring(p);
                for (int k = 0; k < 8; ++k) {
                    n[static_cast<std::size_t>(k)] = img.count(neighbors[static_cast<std::size_t>(k)]) ? 1 : 0;
                    b += n[static_cast<std::size_t>(k)];
                }
                if (b < 2 || b > 6) continue;
                int a = 0;
                for (int k = 0; k < 8; ++k)
                    if (n[static_cast<std::size_t>(k)] == 0 &&
                        n[static_cast<std::size_t>((k + 1) % 8)] == 1)
                        ++a;
                if (a != 1) continue;
                const int p2 = n[0], p4 = n[2], p6 = n[4], p8 = n[6];
                if (sub == 0 && ((p2 * p4 * p6) != 0 || (p4 * p6 * p8) != 0)) continue;
                if (sub == 1 && ((p2 * p4 * p8) != 0 || (p2 * p6 * p8) != 0)) continue;
                flagged.push_back(p);
            }
            if (!flagged.empty()) changed = true;
            for (const auto& p : flagged) img.erase(p);
        }
    }

    OccupancyGrid out = grid;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            out.at(i, j) = img.count({i, j}) ? kFree : kOccupied;
    return out;
}

namespace {

std::vector<int> label8(const OccupancyGrid& grid, std::uint8_t value) {
    std::vector<int> labels(grid.pixel_count(), -1);
    int next = 0;
    std::vector<std::pair<int, int>> stack;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j) {
            if (grid.at(i, j) != value || labels[static_cast<std::size_t>(i * grid.width() + j)] >= 0)
                continue;
            labels[static_cast<std::size_t>(i * grid.width() + j)] = next;
            stack.assign(1, {i, j});
            while (!stack.empty()) {
                const auto [r, c] = stack.back();
                stack.pop_back();
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = r + dr, nc = c + dc;
                        if (!grid.in_bounds(nr, nc) || grid.at(nr, nc) != value) continue;
                        auto& l = labels[static_cast<std::size_t>(nr * grid.width() + nc)];
                        if (l >= 0) continue;
                        l = next;
                        stack.push_back({nr, nc});
                    }
            }
            ++next;
        }
    return labels;
}

}  // namespace

std::size_t count_components8(const OccupancyGrid& grid, std::uint8_t value) {
    const auto labels = label8(grid, value);
    int mx = -1;
    for (const int l : labels) mx = std::max(mx, l);
    return static_cast<std::size_t>(mx + 1);
}

bool has_full_2x2(const OccupancyGrid& grid, std::uint8_t value) {
    for (int i = 0; i + 1 < grid.height(); ++i)
        for (int j = 0; j + 1 < grid.width(); ++j)
            if (grid.at(i, j) == value && grid.at(i + 1, j) == value &&
                grid.at(i, j + 1) == value && grid.at(i + 1, j + 1) == value)
                return true;
    return false;
}

OccupancyGrid largest_filled_component(const OccupancyGrid& grid) {
    const auto labels = label8(grid, kFree);
    int comp_count = -1;
    for (const int l : labels) comp_count = std::max(comp_count, l);
    ++comp_count;

    std::vector<std::vector<std::int32_t>> filled(static_cast<std::size_t>(comp_count));
    for (int id = 0; id < comp_count; ++id) {
        // Flood everything that is not this component, 4-connected, from the
        // map border; whatever stays unreached is the filled region.
        std::vector<std::uint8_t> outside(grid.pixel_count(), 0);
        std::vector<std::pair<int, int>> stack;
        auto push = [&](int r, int c) {
            if (!grid.in_bounds(r, c)) return;
            const auto idx = static_cast<std::size_t>(r * grid.width() + c);
            if (outside[idx] || labels[idx] == id) return;
            outside[idx] = 1;
            stack.push_back({r, c});
        };
        for (int r = 0; r < grid.height(); ++r) {
            push(r, 0);
            push(r, grid.width() - 1);
        }
        for (int c = 0; c < grid.width(); ++c) {
            push(0, c);
            push(grid.height() - 1, c);
        }
        while (!stack.empty()) {
            const auto [r, c] = stack.back();
            stack.pop_back();
            push(r - 1, c);
            push(r + 1, c);
            push(r, c - 1);
            push(r, c + 1);
        }
        for (std::size_t idx = 0; idx < grid.pixel_count(); ++idx)
            if (!outside[idx]) filled[static_cast<std::size_t>(id)].push_back(static_cast<std::int32_t>(idx));
    }

    std::size_t best = 0;
    for (std::size_t id = 1; id < filled.size(); ++id)
        if (filled[id].size() > filled[best].size()) best = id;

    OccupancyGrid out = grid;
    std::fill(out.cells().begin(), out.cells().end(), kOccupied);
    if (!filled.empty())
        for (const std::int32_t idx : filled[best])
            out.cells()[static_cast<std::size_t>(idx)] = kFree;
    return out;
}

BrutePath brute_shortest_path(const WaypointGraph& graph, std::size_t source,
                              std::size_t target) {
    const std::size_t lo = std::min(source, target), hi = std::max(source, target);
    BrutePath best;

    std::vector<char> used(graph.vertex_count(), 0);
    std::vector<std::size_t> current{lo};
    used[lo] = 1;
    PathCost cost;

    // DFS over all simple paths; fine for the <= 10 vertex instances used in
    // tests.
    auto consider = [&]() {
        if (!best.found || cost_less(cost, best.cost) ||
            (cost == best.cost && current < best.path)) {
            best.found = true;
            best.cost = cost;
            best.path = current;
        }
    };
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
        if (v == hi) {
            consider();
            return;
        }
        for (const auto& n : graph.neighbors(v)) {
            if (used[n.index]) continue;
            used[n.index] = 1;
            current.push_back(n.index);
            (n.diagonal ? cost.diagonal : cost.orthogonal) += 1;
            dfs(n.index);
            (n.diagonal ? cost.diagonal : cost.orthogonal) -= 1;
            current.pop_back();
            used[n.index] = 0;
        }
    };
    if (lo == hi) {
        best.found = true;
        best.path = {lo};
        return best;
    }
    dfs(lo);
    if (best.found && source == hi) std::reverse(best.path.begin(), best.path.end());
    return best;
}

WaypointSet pixels_to_waypoints(const std::vector<PixelCoord>& pixels, double resolution,
                                Vec2 origin) {
    WaypointSet set;
    set.resolution = resolution;
    set.origin = origin;
    for (const PixelCoord& p : pixels) {
        set.points.push_back({resolution * p.row + origin.x, resolution * p.col + origin.y});
        set.source_pixels.push_back(p);
    }
    return set;
}

WaypointSet random_pixel_cluster(std::mt19937& rng, int extent, int count) {
    std::set<std::pair<int, int>> chosen;
    std::uniform_int_distribution<int> coord(0, extent - 1);
    while (static_cast<int>(chosen.size()) < count)
        chosen.insert({coord(rng), coord(rng)});
    std::vector<PixelCoord> pixels;
    for (const auto& [r, c] : chosen) pixels.push_back({r, c});
    return pixels_to_waypoints(pixels);
}

WaypointSet random_pixel_tree(std::mt19937& rng, int target_size) {
    std::set<std::pair<int, int>> pixels{{0, 0}};
    std::vector<std::pair<int, int>> order{{0, 0}};
    const int dirs[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                            {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    std::uniform_int_distribution<std::size_t> pick_dir(0, 7);
    int attempts = 0;
    while (static_cast<int>(pixels.size()) < target_size && attempts < target_size * 200) {
        ++attempts;
        std::uniform_int_distribution<std::size_t> pick(0, order.size() - 1);
        const auto [r, c] = order[pick(rng)];
        const auto& d = dirs[pick_dir(rng)];
        const std::pair<int, int> cand{r + d[0], c + d[1]};
        if (pixels.count(cand)) continue;
        int touching = 0;
        for (const auto& dd : dirs)
            touching += pixels.count({cand.first + dd[0], cand.second + dd[1]}) ? 1 : 0;
        if (touching != 1) continue;
        pixels.insert(cand);
        order.push_back(cand);
    }
    std::vector<PixelCoord> out;
    for (const auto& [r, c] : pixels) out.push_back({r, c});
    return pixels_to_waypoints(out);
}

OccupancyGrid grid_from_free_pixels(int width, int height,
                                    const std::vector<PixelCoord>& free_pixels,
                                    double resolution, Vec2 origin) {
    MapMetadata meta;
    meta.resolution = resolution;
    meta.origin = origin;
    OccupancyGrid grid(width, height, kOccupied, meta);
    for (const PixelCoord& p : free_pixels) grid.at(p.row, p.col) = kFree;
    return grid;
}

}  // namespace covpath::oracle
