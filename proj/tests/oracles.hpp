#pragma once

// Reference implementations for tests: deliberately naive and written
// independently of the library code paths they check.

#include <random>
#include <vector>

#include "covpath/map_reader.hpp"
#include "covpath/occupancy_grid.hpp"
#include "covpath/waypoint_graph.hpp"

namespace covpath::oracle {

/// Direct dense 2D Gaussian convolution (no separability), replicated edges.
OccupancyGrid dense_gaussian(const OccupancyGrid& grid, int sigma);

/// Direct window-min erosion with the floor(k/2) anchor.
OccupancyGrid naive_erode(const OccupancyGrid& grid, int erosion_k);

/// Textbook two-subiteration parallel Zhang-Suen over a pixel set; no
/// candidate tracking, no component reinstatement.
OccupancyGrid classic_zhang_suen(const OccupancyGrid& grid);

/// Largest filled free component via whole-map background flooding.
OccupancyGrid largest_filled_component(const OccupancyGrid& grid);

std::size_t count_components8(const OccupancyGrid& grid, std::uint8_t value);
bool has_full_2x2(const OccupancyGrid& grid, std::uint8_t value);

struct BrutePath {
    bool found{false};
    std::vector<std::size_t> path;
    PathCost cost;
};

/// Exhaustive simple-path enumeration with the same exact-cost canonical
/// tie-break (lexicographically smallest read from the lower endpoint).
BrutePath brute_shortest_path(const WaypointGraph& graph, std::size_t source,
                              std::size_t target);

WaypointSet pixels_to_waypoints(const std::vector<PixelCoord>& pixels, double resolution = 0.1,
                                Vec2 origin = {});

/// Uniform random distinct pixels in [0, extent)^2.
WaypointSet random_pixel_cluster(std::mt19937& rng, int extent, int count);

/// Random pixel set whose 8-adjacency graph is a tree (each new pixel
/// touches exactly one existing pixel).
WaypointSet random_pixel_tree(std::mt19937& rng, int target_size);

OccupancyGrid grid_from_free_pixels(int width, int height,
                                    const std::vector<PixelCoord>& free_pixels,
                                    double resolution = 0.1, Vec2 origin = {});

}  // namespace covpath::oracle
