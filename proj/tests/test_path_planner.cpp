#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "covpath/errors.hpp"
#include "covpath/path_planner.hpp"
#include "covpath/sim_world.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covpath;

namespace {

PlannerParams params_at(double x, double y, double spacing = 0.1) {
    PlannerParams p;
    p.waypoint_spacing = spacing;
    p.start_position = {x, y};
    return p;
}

// Stitch a fixed leaf order the way the planner does, used as the
// independent coverage oracle over every permutation.
std::vector<std::size_t> stitch_order(const WaypointGraph& g,
                                      const std::vector<std::size_t>& order) {
    std::vector<std::size_t> path;
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        for (const std::size_t v : g.shortest_path(order[i], order[i + 1]))
            if (seen.insert(v).second) path.push_back(v);
    if (order.size() == 1 && seen.insert(order[0]).second) path.push_back(order[0]);
    return path;
}

bool exactly_once_coverage(const WaypointGraph& g, const std::vector<std::size_t>& path) {
    if (path.size() != g.vertex_count()) return false;
    std::set<std::size_t> seen(path.begin(), path.end());
    return seen.size() == g.vertex_count();
}

}  // namespace

TEST_CASE("find_nearest_leaf picks by straight-line distance with index ties") {
    const auto g = WaypointGraph::build(
        oracle::pixels_to_waypoints({{0, 0}, {3, 4}, {0, 2}}, 1.0));
    const std::vector<std::size_t> candidates{0, 1, 2};

    CHECK(find_nearest_leaf({0.0, 1.0}, candidates, g) == 0);   // 1.0 beats sqrt(18)
    CHECK(find_nearest_leaf({3.0, 4.0}, candidates, g) == 1);   // distance 0
    CHECK(find_nearest_leaf({0.0, 1.0}, std::vector<std::size_t>{0, 2}, g) == 0);  // tie

    CHECK_THROWS_AS(find_nearest_leaf({0, 0}, std::vector<std::size_t>{}, g),
                    InvalidArgumentError);
}

TEST_CASE("plan walks a path graph from the nearest end") {
    const auto g = WaypointGraph::build(
        oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {0, 2}}, 0.1));
    const PlannedPath path = plan(g, params_at(-0.05, 0.0));
    CHECK(path.full_path == std::vector<std::size_t>{0, 1, 2});
    CHECK(path.vertex_coverage == doctest::Approx(1.0));
}

TEST_CASE("plan visits star arms with the hub appended once") {
    // Hub at (2,2), arms on the four diagonals, start near the (0,0) tip.
    const auto g = WaypointGraph::build(oracle::pixels_to_waypoints(
        {{2, 2}, {1, 1}, {0, 0}, {1, 3}, {0, 4}, {3, 1}, {4, 0}, {3, 3}, {4, 4}}, 0.1));
    const PlannedPath path = plan(g, params_at(0.0, 0.0));
    CHECK(exactly_once_coverage(g, path.full_path));
    CHECK(path.full_path.front() == 2);
    CHECK(std::count(path.full_path.begin(), path.full_path.end(), 0u) == 1);
}

TEST_CASE("plan trivial graphs") {
    const auto lone = WaypointGraph::build(oracle::pixels_to_waypoints({{4, 4}}, 0.1));
    const PlannedPath single = plan(lone, params_at(0, 0));
    CHECK(single.full_path == std::vector<std::size_t>{0});
    CHECK(single.spliced_path.size() == 1);

    const WaypointGraph empty = WaypointGraph::build(oracle::pixels_to_waypoints({}, 0.1));
    const PlannedPath none = plan(empty, params_at(0, 0));
    CHECK(none.full_path.empty());
    CHECK(none.spliced_path.empty());
}

TEST_CASE("plan covers trees exactly once for 200 random instances") {
    std::mt19937 rng(97);
    std::uniform_int_distribution<int> size(2, 50);
    std::uniform_real_distribution<double> start(-1.0, 4.0);
    for (int t = 0; t < 200; ++t) {
        const WaypointSet set = oracle::random_pixel_tree(rng, size(rng));
        const auto g = WaypointGraph::build(set);
        const PlannedPath path = plan(g, params_at(start(rng), start(rng)));
        CHECK(exactly_once_coverage(g, path.full_path));

        // Leaf completeness: each leaf exactly once.
        for (const std::size_t leaf : g.find_leaves())
            CHECK(std::count(path.full_path.begin(), path.full_path.end(), leaf) == 1);
    }
}

TEST_CASE("every leaf permutation of a tree covers all vertices exactly once") {
    std::mt19937 rng(131);
    int instances = 0;
    while (instances < 25) {
        const WaypointSet set = oracle::random_pixel_tree(rng, 14);
        const auto g = WaypointGraph::build(set);
        auto leaves = g.find_leaves();
        if (leaves.size() > 7) continue;
        ++instances;
        std::sort(leaves.begin(), leaves.end());
        do {
            CHECK(exactly_once_coverage(g, stitch_order(g, leaves)));
        } while (std::next_permutation(leaves.begin(), leaves.end()));
    }
}

TEST_CASE("greedy order is optimal on 3-leaf stars") {
    // With the start leaf fixed, picking the nearer of two remaining leaves
    // first is always at least as short.
    std::mt19937 rng(151);
    std::uniform_int_distribution<int> arm(1, 30);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    const PixelCoord dirs[3] = {{-1, -1}, {-1, 1}, {1, 1}};
    for (int t = 0; t < 200; ++t) {
        std::vector<PixelCoord> pixels{{0, 0}};
        std::vector<std::size_t> leaves;
        for (const auto& d : dirs) {
            const int len = arm(rng);
            for (int k = 1; k <= len; ++k)
                pixels.push_back({d.row * k, d.col * k});
            leaves.push_back(pixels.size() - 1);
        }
        const WaypointSet set = oracle::pixels_to_waypoints(pixels, 0.1);
        const auto g = WaypointGraph::build(set);
        REQUIRE(g.find_leaves() == leaves);

        const Vec2 start{coord(rng), coord(rng)};
        const PlannedPath path = plan(g, params_at(start.x, start.y));
        CHECK(exactly_once_coverage(g, path.full_path));

        // Order of leaves as they appear in P.
        std::vector<std::size_t> visit;
        for (const std::size_t v : path.full_path)
            if (std::find(leaves.begin(), leaves.end(), v) != leaves.end()) visit.push_back(v);
        REQUIRE(visit.size() == 3);
        auto tour = [&](const std::vector<std::size_t>& order) {
            double total = 0.0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i)
                total += distance(g.point(order[i]), g.point(order[i + 1]));
            return total;
        };
        const std::vector<std::size_t> alt{visit[0], visit[2], visit[1]};
        CHECK(tour(visit) <= tour(alt) + 1e-12);
    }
}

TEST_CASE("disconnected graphs plan the start component unless chained") {
    // Two separated chains.
    const WaypointSet set = oracle::pixels_to_waypoints(
        {{0, 0}, {0, 1}, {0, 2}, {9, 9}, {9, 10}}, 0.1);
    const auto g = WaypointGraph::build(set);
    REQUIRE(g.component_count() == 2);

    const PlannedPath near_first = plan(g, params_at(0.0, 0.0));
    CHECK(near_first.full_path == std::vector<std::size_t>{0, 1, 2});
    CHECK(near_first.planned_components == 1);
    CHECK(near_first.total_components == 2);
    CHECK(near_first.vertex_coverage == doctest::Approx(3.0 / 5.0));

    PlannerParams chained = params_at(0.0, 0.0);
    chained.chain_components = true;
    const PlannedPath all = plan(g, chained);
    CHECK(exactly_once_coverage(g, all.full_path));
    CHECK(all.planned_components == 2);
}

TEST_CASE("a pure cycle is traversed once from the nearest vertex") {
    // 8-pixel ring, no leaves.
    const WaypointSet set = oracle::pixels_to_waypoints(
        {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}}, 0.1);
    const auto g = WaypointGraph::build(set);
    REQUIRE(g.find_leaves().empty());
    const PlannedPath path = plan(g, params_at(-0.05, 0.0));
    CHECK(exactly_once_coverage(g, path.full_path));
    CHECK(path.full_path.front() == 0);
}

TEST_CASE("splice takes every stride-th element of the full path") {
    const std::vector<PixelCoord> chain = [] {
        std::vector<PixelCoord> out;
        for (int c = 0; c < 10; ++c) out.push_back({0, c});
        return out;
    }();
    const auto g = WaypointGraph::build(oracle::pixels_to_waypoints(chain, 0.1));
    PlannedPath path = plan(g, params_at(0.0, -0.5, 0.1));
    REQUIRE(path.full_path.size() == 10);

    SUBCASE("stride 3 keeps indices 0,3,6,9") {
        path = splice(g, path, 3.0);
        REQUIRE(path.spliced_path.size() == 4);
        CHECK(path.spliced_path[0].y == doctest::Approx(0.0));
        CHECK(path.spliced_path[1].y == doctest::Approx(0.3));
        CHECK(path.spliced_path[3].y == doctest::Approx(0.9));
    }
    SUBCASE("D = R keeps everything") {
        path = splice(g, path, 1.0);
        CHECK(path.spliced_path.size() == 10);
    }
    SUBCASE("endpoints rule: first element always kept, last is stride*floor((n-1)/stride)") {
        for (const double divisor : {1.0, 2.0, 3.0, 4.0, 7.0, 20.0}) {
            path = splice(g, path, divisor);
            const auto stride = static_cast<std::size_t>(path.stride);
            CHECK(path.spliced_path.size() == (path.full_path.size() - 1) / stride + 1);
            CHECK(path.spliced_path.front().y == doctest::Approx(0.0));
            const std::size_t last = stride * ((path.full_path.size() - 1) / stride);
            CHECK(path.spliced_path.back().y ==
                  doctest::Approx(g.point(path.full_path[last]).y));
        }
    }
}

TEST_CASE("plan validates spacing against the resolution") {
    const auto g = WaypointGraph::build(oracle::pixels_to_waypoints({{0, 0}, {0, 1}}, 0.1));
    CHECK_THROWS_AS(plan(g, params_at(0, 0, 0.05)), InvalidArgumentError);
    CHECK_THROWS_AS(plan(g, params_at(0, 0, -1.0)), InvalidArgumentError);
}

TEST_CASE("corridor map spliced at D=1.0 spaces waypoints near one meter") {
    const OccupancyGrid map = generate_synthetic_map(MapShape::Corridor, 300, 60, 0.1, 8);
    const WaypointSet set = read_map(map, ReaderParams{});
    const auto g = WaypointGraph::build(set);
    PlannerParams params = params_at(map.origin().x, map.origin().y, 1.0);
    const PlannedPath path = plan(g, params);
    CHECK(path.stride == 10);

    const std::set<std::size_t> unique(path.full_path.begin(), path.full_path.end());
    CHECK(unique.size() == path.full_path.size());

    const PathSummary summary = path_metrics(path);
    REQUIRE(summary.count >= 10);
    CHECK(*summary.mean_spacing == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("path_metrics on simple inputs") {
    PlannedPath path;
    path.spliced_path = {{0, 0}, {1, 0}, {2, 0}};
    const PathSummary s = path_metrics(path);
    CHECK(s.count == 3);
    CHECK(s.total_length == doctest::Approx(2.0));
    CHECK(*s.mean_spacing == doctest::Approx(1.0));
    CHECK(*s.min_spacing == doctest::Approx(1.0));
    CHECK(*s.max_spacing == doctest::Approx(1.0));

    PlannedPath single;
    single.spliced_path = {{3, 4}};
    const PathSummary s1 = path_metrics(single);
    CHECK(s1.count == 1);
    CHECK(s1.total_length == 0.0);
    CHECK(!s1.mean_spacing.has_value());
}

TEST_CASE("planning is deterministic") {
    std::mt19937 rng(177);
    const WaypointSet set = oracle::random_pixel_tree(rng, 40);
    const auto g = WaypointGraph::build(set);
    const PlannedPath a = plan(g, params_at(1.0, -2.0, 0.5));
    const PlannedPath b = plan(g, params_at(1.0, -2.0, 0.5));
    CHECK(a.full_path == b.full_path);
    REQUIRE(a.spliced_path.size() == b.spliced_path.size());
    for (std::size_t i = 0; i < a.spliced_path.size(); ++i) {
        CHECK(a.spliced_path[i].x == b.spliced_path[i].x);
        CHECK(a.spliced_path[i].y == b.spliced_path[i].y);
    }
}

TEST_CASE("path files round-trip the spliced path") {
    const OccupancyGrid map = generate_synthetic_map(MapShape::LRoom, 120, 120, 0.1, 6);
    const WaypointSet set = read_map(map, ReaderParams{});
    const auto g = WaypointGraph::build(set);
    PlannerParams params = params_at(0.0, 0.0, 1.0);
    const PlannedPath path = plan(g, params);

    const auto file = std::filesystem::temp_directory_path() / "covpath_path.txt";
    save_path(path, file);
    const PlannedPath back = load_path(file);
    REQUIRE(back.spliced_path.size() == path.spliced_path.size());
    CHECK(back.stride == path.stride);
    CHECK(back.spacing == doctest::Approx(path.spacing));
    CHECK(back.resolution == doctest::Approx(path.resolution));
    for (std::size_t i = 0; i < path.spliced_path.size(); ++i) {
        CHECK(back.spliced_path[i].x == path.spliced_path[i].x);
        CHECK(back.spliced_path[i].y == path.spliced_path[i].y);
    }
}
