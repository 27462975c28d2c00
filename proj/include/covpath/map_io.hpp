#pragma once

#include <filesystem>

#include "covpath/occupancy_grid.hpp"

namespace covpath {

/// Load a binary PGM (P5, maxval 255) together with its metadata sidecar and
/// validate that every cell is one of {0, 128, 255}.
OccupancyGrid load_map(const std::filesystem::path& image_path,
                       const std::filesystem::path& metadata_path);

/// Write `<stage_name>.pgm` plus `<stage_name>.meta` into out_dir and return
/// the image path. Accepts arbitrary 8-bit cell values (intermediate stages
/// are gray).
std::filesystem::path save_stage(const OccupancyGrid& grid, const std::string& stage_name,
                                 const std::filesystem::path& out_dir);

// Raw PGM access without the tri-level check; metadata must be supplied or
// merged by the caller.
OccupancyGrid load_pgm(const std::filesystem::path& path);
void save_pgm(const OccupancyGrid& grid, const std::filesystem::path& path);

MapMetadata load_metadata(const std::filesystem::path& path);
void save_metadata(const MapMetadata& meta, const std::filesystem::path& path);

}  // namespace covpath
