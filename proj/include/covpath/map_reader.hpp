#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "covpath/occupancy_grid.hpp"

namespace covpath {

struct ReaderParams {
    int sigma{3};       // Gaussian standard deviation, pixels
    int kappa{128};     // binarization threshold, 8-bit
    int erosion_k{10};  // square structuring element side, pixels

    void validate() const;
};

/// Maps world x to the pixel row and world y to the pixel column by default;
/// ColRow swaps the pair for maps authored in the x=column convention.
enum class AxisOrder { RowCol, ColRow };

struct PixelCoord {
    int row{0};
    int col{0};

    bool operator==(const PixelCoord&) const = default;
};

/// Unordered waypoint set extracted from skeleton pixels, with the source
/// pixel of every point and the map geometry needed to invert the transform.
struct WaypointSet {
    std::vector<Vec2> points;
    std::vector<PixelCoord> source_pixels;
    double resolution{0.1};
    Vec2 origin{};
    AxisOrder axis{AxisOrder::RowCol};

    std::size_t size() const { return points.size(); }
};

// Pipeline stages, in order of application.
OccupancyGrid fold_unknown(const OccupancyGrid& grid);
OccupancyGrid gaussian_smooth(const OccupancyGrid& grid, int sigma);
OccupancyGrid binarize(const OccupancyGrid& grid, int kappa);
OccupancyGrid fill_largest_contour(const OccupancyGrid& grid);
OccupancyGrid erode(const OccupancyGrid& grid, int erosion_k);
OccupancyGrid skeletonize(const OccupancyGrid& grid);
WaypointSet extract_waypoints(const OccupancyGrid& grid, AxisOrder axis = AxisOrder::RowCol);

/// Full pipeline: fold -> smooth -> binarize -> fill -> erode -> skeletonize
/// -> extract. When stages_dir is set, dumps original.pgm, adjusted.pgm,
/// fuzzied.pgm, contour.pgm, eroded.pgm and skeleton.pgm along the way.
WaypointSet read_map(const OccupancyGrid& grid, const ReaderParams& params,
                     AxisOrder axis = AxisOrder::RowCol,
                     const std::optional<std::filesystem::path>& stages_dir = {});

/// Stage dump names in pipeline order.
const std::vector<std::string>& stage_names();

void save_waypoints(const WaypointSet& set, const std::filesystem::path& path);
WaypointSet load_waypoints(const std::filesystem::path& path);

}  // namespace covpath
