#include "covpath/map_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "covpath/errors.hpp"

namespace covpath {

void MapMetadata::validate() const {
    if (!(resolution > 0.0)) throw ValidationError("metadata resolution must be > 0");
}

OccupancyGrid::OccupancyGrid(int width, int height, std::uint8_t fill, MapMetadata meta)
    : width_(width), height_(height), meta_(std::move(meta)) {
    if (width < 1 || height < 1)
        throw ValidationError("grid dimensions must be at least 1x1");
    meta_.validate();
    cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

bool OccupancyGrid::is_tri_level() const {
    for (std::uint8_t v : cells_)
        if (v != kOccupied && v != kUnknown && v != kFree) return false;
    return true;
}

bool OccupancyGrid::is_bi_level() const {
    for (std::uint8_t v : cells_)
        if (v != kOccupied && v != kFree) return false;
    return true;
}

std::size_t OccupancyGrid::count_value(std::uint8_t value) const {
    std::size_t n = 0;
    for (std::uint8_t v : cells_)
        if (v == value) ++n;
    return n;
}

bool OccupancyGrid::operator==(const OccupancyGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ && cells_ == other.cells_;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// PGM token reader: skips whitespace and '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_pgm_int(std::istream& in, const char* what) {
    const std::string tok = next_pgm_token(in);
    if (tok.empty()) throw FormatError(std::string("PGM header truncated before ") + what);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("PGM header field ") + what + " is not an integer: '" +
                          tok + "'");
    }
}

}  // namespace

OccupancyGrid load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open PGM file: " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5')
        throw FormatError("not a binary PGM (expected magic P5): " + path.string());

    const int width = parse_pgm_int(in, "width");
    const int height = parse_pgm_int(in, "height");
    const int maxval = parse_pgm_int(in, "maxval");
    if (width < 1 || height < 1)
        throw FormatError("PGM dimensions must be positive: " + path.string());
    if (maxval != 255)
        throw FormatError("PGM maxval must be 255, got " + std::to_string(maxval));

    // The single whitespace byte after maxval was consumed by the tokenizer.
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    OccupancyGrid grid(width, height, 0);
    in.read(reinterpret_cast<char*>(grid.cells().data()),
            static_cast<std::streamsize>(expected));
    if (static_cast<std::size_t>(in.gcount()) != expected)
        throw FormatError("PGM payload shorter than declared " + std::to_string(width) + "x" +
                          std::to_string(height));
    if (in.get() != EOF)
        throw FormatError("PGM payload longer than declared " + std::to_string(width) + "x" +
                          std::to_string(height));
    return grid;
}

void save_pgm(const OccupancyGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PGM file: " + path.string());
    out << "P5\n" << grid.width() << " " << grid.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(grid.cells().data()),
              static_cast<std::streamsize>(grid.pixel_count()));
    if (!out) throw IoError("failed writing PGM payload: " + path.string());
}

MapMetadata load_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open metadata file: " + path.string());

    MapMetadata meta;
    bool have_res = false, have_ox = false, have_oy = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto parse = [&](const char* name) {
            char* end = nullptr;
            const double v = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0')
                throw SchemaError(std::string("metadata field ") + name +
                                  " is not a number: '" + value + "'");
            return v;
        };
        if (key == "resolution") {
            meta.resolution = parse("resolution");
            have_res = true;
        } else if (key == "origin_x") {
            meta.origin.x = parse("origin_x");
            have_ox = true;
        } else if (key == "origin_y") {
            meta.origin.y = parse("origin_y");
            have_oy = true;
        } else if (key == "name") {
            meta.name = value;
        }
    }
    if (!have_res) throw SchemaError("metadata missing required field: resolution");
    if (!have_ox) throw SchemaError("metadata missing required field: origin_x");
    if (!have_oy) throw SchemaError("metadata missing required field: origin_y");
    meta.validate();
    return meta;
}

void save_metadata(const MapMetadata& meta, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write metadata file: " + path.string());
    out << "resolution = " << format_double(meta.resolution) << "\n";
    out << "origin_x = " << format_double(meta.origin.x) << "\n";
    out << "origin_y = " << format_double(meta.origin.y) << "\n";
    if (!meta.name.empty()) out << "name = " << meta.name << "\n";
    if (!out) throw IoError("failed writing metadata: " + path.string());
}

OccupancyGrid load_map(const std::filesystem::path& image_path,
                       const std::filesystem::path& metadata_path) {
    OccupancyGrid grid = load_pgm(image_path);
    MapMetadata meta = load_metadata(metadata_path);
    if (meta.name.empty()) meta.name = image_path.stem().string();
    grid.meta() = meta;

    const auto cells = grid.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::uint8_t v = cells[i];
        if (v != kOccupied && v != kUnknown && v != kFree) {
            const int row = static_cast<int>(i) / grid.width();
            const int col = static_cast<int>(i) % grid.width();
            throw ValidationError("cell value " + std::to_string(v) +
                                  " is not one of {0, 128, 255} at (row, col) = (" +
                                  std::to_string(row) + ", " + std::to_string(col) + ")");
        }
    }
    return grid;
}

std::filesystem::path save_stage(const OccupancyGrid& grid, const std::string& stage_name,
                                 const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw IoError("stage output directory is not writable: " + out_dir.string());
    const auto image_path = out_dir / (stage_name + ".pgm");
    save_pgm(grid, image_path);
    MapMetadata meta = grid.meta();
    if (meta.name.empty()) meta.name = stage_name;
    save_metadata(meta, out_dir / (stage_name + ".meta"));
    return image_path;
}

}  // namespace covpath
