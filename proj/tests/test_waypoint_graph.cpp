#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "covpath/errors.hpp"
#include "covpath/map_reader.hpp"
#include "covpath/sim_world.hpp"
#include "covpath/waypoint_graph.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace covpath;

TEST_CASE("build connects 8-neighboring source pixels with metric weights") {
    SUBCASE("three collinear pixels form a path") {
        const auto g = WaypointGraph::build(
            oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {0, 2}}, 0.1));
        CHECK(g.vertex_count() == 3);
        CHECK(g.edge_count() == 2);
        CHECK(g.degree(0) == 1);
        CHECK(g.degree(1) == 2);
        CHECK(g.degree(2) == 1);
        for (const auto& n : g.neighbors(1))
            CHECK(g.edge_weight(n) == doctest::Approx(0.1));
    }
    SUBCASE("diagonal neighbors weigh resolution * sqrt(2)") {
        const auto g = WaypointGraph::build(oracle::pixels_to_waypoints({{0, 0}, {1, 1}}, 0.1));
        CHECK(g.edge_count() == 1);
        CHECK(g.edge_weight(g.neighbors(0)[0]) == doctest::Approx(0.1 * std::sqrt(2.0)));
    }
    SUBCASE("a two-pixel gap yields no edge") {
        const auto g = WaypointGraph::build(oracle::pixels_to_waypoints({{0, 0}, {0, 2}}, 0.1));
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("duplicate source pixels are rejected") {
        CHECK_THROWS_AS(
            WaypointGraph::build(oracle::pixels_to_waypoints({{1, 1}, {1, 1}}, 0.1)),
            ValidationError);
    }
}

TEST_CASE("graph is undirected with consistent weights and no self loops") {
    std::mt19937 rng(13);
    for (int t = 0; t < 20; ++t) {
        const auto g = WaypointGraph::build(oracle::random_pixel_cluster(rng, 6, 12));
        for (std::size_t v = 0; v < g.vertex_count(); ++v) {
            for (const auto& n : g.neighbors(v)) {
                CHECK(n.index != v);
                bool back = false;
                for (const auto& m : g.neighbors(n.index))
                    if (m.index == v && m.diagonal == n.diagonal) back = true;
                CHECK(back);
            }
        }
    }
}

TEST_CASE("degree equals the count of present 8-neighbor source pixels") {
    std::mt19937 rng(29);
    const auto set = oracle::random_pixel_cluster(rng, 7, 20);
    const auto g = WaypointGraph::build(set);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        std::size_t expected = 0;
        for (std::size_t u = 0; u < g.vertex_count(); ++u) {
            if (u == v) continue;
            const auto a = set.source_pixels[v], b = set.source_pixels[u];
            if (std::abs(a.row - b.row) <= 1 && std::abs(a.col - b.col) <= 1) ++expected;
        }
        CHECK(g.degree(v) == expected);
    }
}

TEST_CASE("find_leaves returns degree <= 1 vertices") {
    SUBCASE("path endpoints") {
        const auto g = WaypointGraph::build(
            oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {0, 2}}, 0.1));
        CHECK(g.find_leaves() == std::vector<std::size_t>{0, 2});
    }
    SUBCASE("star with four diagonal arms of length 2") {
        const auto g = WaypointGraph::build(oracle::pixels_to_waypoints(
            {{2, 2}, {1, 1}, {0, 0}, {1, 3}, {0, 4}, {3, 1}, {4, 0}, {3, 3}, {4, 4}}, 0.1));
        CHECK(g.find_leaves() == std::vector<std::size_t>{2, 4, 6, 8});
        CHECK(g.degree(0) == 4);
    }
    SUBCASE("an isolated vertex is its own leaf") {
        const auto g = WaypointGraph::build(oracle::pixels_to_waypoints({{5, 5}}, 0.1));
        CHECK(g.find_leaves() == std::vector<std::size_t>{0});
    }
}

TEST_CASE("shortest_path basics") {
    const auto g =
        WaypointGraph::build(oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {0, 2}}, 0.1));
    CHECK(g.shortest_path(0, 2) == std::vector<std::size_t>{0, 1, 2});
    CHECK(g.shortest_path(1, 1) == std::vector<std::size_t>{1});
}

TEST_CASE("shortest_path on a 4-cycle with a chord matches brute force") {
    // Square of orthogonal steps plus one diagonal chord.
    const auto g = WaypointGraph::build(
        oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, 0.1));
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t) {
            const auto brute = oracle::brute_shortest_path(g, s, t);
            CHECK(g.shortest_path(s, t) == brute.path);
        }
}

TEST_CASE("shortest_path matches exhaustive enumeration on random clusters") {
    std::mt19937 rng(41);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const auto g = WaypointGraph::build(oracle::random_pixel_cluster(rng, 5, 9));
        std::uniform_int_distribution<std::size_t> pick(0, g.vertex_count() - 1);
        const std::size_t s = pick(rng), d = pick(rng);
        const auto brute = oracle::brute_shortest_path(g, s, d);
        if (!brute.found) {
            CHECK_THROWS_AS(g.shortest_path(s, d), NoPathError);
            continue;
        }
        const auto path = g.shortest_path(s, d);
        CHECK(path == brute.path);
        CHECK(g.path_cost(path) == brute.cost);
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("shortest_path reversed equals the opposite query") {
    std::mt19937 rng(53);
    for (int t = 0; t < 40; ++t) {
        const auto g = WaypointGraph::build(oracle::random_pixel_cluster(rng, 5, 10));
        std::uniform_int_distribution<std::size_t> pick(0, g.vertex_count() - 1);
        const std::size_t s = pick(rng), d = pick(rng);
        std::vector<std::size_t> forward;
        try {
            forward = g.shortest_path(s, d);
        } catch (const NoPathError&) {
            continue;
        }
        auto backward = g.shortest_path(d, s);
        std::reverse(backward.begin(), backward.end());
        CHECK(forward == backward);
    }
}

TEST_CASE("unreachable targets name both components") {
    const auto g = WaypointGraph::build(
        oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {5, 5}, {5, 6}, {5, 7}}, 0.1));
    CHECK(g.component_count() == 2);
    CHECK_THROWS_WITH_AS(g.shortest_path(0, 4), doctest::Contains("component"), NoPathError);
    try {
        g.shortest_path(0, 4);
    } catch (const NoPathError& e) {
        const std::string what = e.what();
        CHECK(what.find("2 vertices") != std::string::npos);
        CHECK(what.find("3 vertices") != std::string::npos);
    }
}

TEST_CASE("exact cost comparison orders mixed orthogonal/diagonal sums") {
    // 3 orthogonal steps > 2 diagonal steps (3 > 2.828...).
    CHECK(cost_less({2, 0}, {3, 0}));
    CHECK(cost_less({0, 2}, {3, 0}));
    CHECK(!cost_less({3, 0}, {0, 2}));
    // 7 orthogonal < 5 diagonal (7 < 7.071...).
    CHECK(cost_less({7, 0}, {0, 5}));
    CHECK(!cost_less({0, 5}, {7, 0}));
    CHECK(!cost_less({4, 2}, {4, 2}));
    CHECK(PathCost{1, 1}.meters(0.1) == doctest::Approx(0.1 + 0.1 * std::sqrt(2.0)));
}

TEST_CASE("skeleton graphs of connected free space are connected") {
    for (const auto shape : {MapShape::Corridor, MapShape::LRoom}) {
        const OccupancyGrid map = generate_synthetic_map(shape, 140, 120, 0.1, 3);
        const WaypointSet set = read_map(map, ReaderParams{});
        REQUIRE(set.size() > 0);
        const auto g = WaypointGraph::build(set);
        CHECK(g.component_count() == 1);
        // Every edge weight is R or R*sqrt(2).
        for (std::size_t v = 0; v < g.vertex_count(); ++v)
            for (const auto& n : g.neighbors(v)) {
                const double w = g.edge_weight(n);
                const bool unit = std::abs(w - 0.1) < 1e-12;
                const bool diag = std::abs(w - 0.1 * std::sqrt(2.0)) < 1e-12;
                CHECK((unit || diag));
            }
    }
}

TEST_CASE("graph export writes a vertex table and edge list") {
    const auto g = WaypointGraph::build(
        oracle::pixels_to_waypoints({{0, 0}, {0, 1}, {1, 1}}, 0.1));
    const auto path = std::filesystem::temp_directory_path() / "covpath_graph.txt";
    g.export_edge_list(path);
    std::ifstream in(path);
    std::string word;
    in >> word;
    CHECK(word == "vertices");
    std::size_t n = 0;
    in >> n;
    CHECK(n == 3);
}
