#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covpath/geometry.hpp"

namespace covpath {

// Tri-level cell encoding of the navigation map.
inline constexpr std::uint8_t kOccupied = 0;
inline constexpr std::uint8_t kUnknown = 128;
inline constexpr std::uint8_t kFree = 255;

struct MapMetadata {
    double resolution{0.1};  // meters per pixel
    Vec2 origin{};           // world coordinates of pixel (0, 0), meters
    std::string name;

    void validate() const;
};

/// Row-major 8-bit occupancy raster. Row 0 is the top of the image; a pixel
/// is addressed as (row, col). On load every cell is one of {0, 128, 255};
/// intermediate pipeline stages may hold any 8-bit value.
class OccupancyGrid {
  public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, std::uint8_t fill = kUnknown, MapMetadata meta = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return cells_.size(); }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    std::uint8_t at(int row, int col) const {
        return cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(col)];
    }
    std::uint8_t& at(int row, int col) {
        return cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(col)];
    }

    std::span<const std::uint8_t> cells() const { return cells_; }
    std::span<std::uint8_t> cells() { return cells_; }

    const MapMetadata& meta() const { return meta_; }
    MapMetadata& meta() { return meta_; }
    double resolution() const { return meta_.resolution; }
    Vec2 origin() const { return meta_.origin; }

    bool is_tri_level() const;
    bool is_bi_level() const;
    std::size_t count_value(std::uint8_t value) const;

    bool operator==(const OccupancyGrid& other) const;

  private:
    int width_{0};
    int height_{0};
    std::vector<std::uint8_t> cells_;
    MapMetadata meta_;
};

}  // namespace covpath
