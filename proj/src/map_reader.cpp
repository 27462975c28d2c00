#include "covpath/map_reader.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>

#include "covpath/errors.hpp"
#include "covpath/map_io.hpp"

namespace covpath {

void ReaderParams::validate() const {
    if (sigma < 1) throw InvalidArgumentError("sigma must be an integer >= 1");
    if (kappa < 0 || kappa > 255) throw InvalidArgumentError("kappa must be in [0, 255]");
    if (erosion_k < 1) throw InvalidArgumentError("erosion kernel side must be >= 1");
}

OccupancyGrid fold_unknown(const OccupancyGrid& grid) {
    OccupancyGrid out = grid;
    for (auto& v : out.cells()) v = (v < kFree) ? kOccupied : kFree;
    return out;
}

OccupancyGrid gaussian_smooth(const OccupancyGrid& grid, int sigma) {
    if (sigma < 1) throw InvalidArgumentError("sigma must be an integer >= 1");
    const int radius = 3 * sigma;
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        const double w = std::exp(-0.5 * (static_cast<double>(t) * t) /
                                  (static_cast<double>(sigma) * sigma));
        kernel[static_cast<std::size_t>(t + radius)] = w;
        total += w;
    }
    for (double& w : kernel) w /= total;

    const int h = grid.height(), w = grid.width();
    auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };

    // Separable convolution with edge replication; one rounding at the end.
    std::vector<double> horizontal(grid.pixel_count());
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       static_cast<double>(grid.at(i, clampi(j + t, w)));
            horizontal[static_cast<std::size_t>(i) * static_cast<std::size_t>(w) +
                       static_cast<std::size_t>(j)] = acc;
        }
    }
    OccupancyGrid out = grid;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += kernel[static_cast<std::size_t>(t + radius)] *
                       horizontal[static_cast<std::size_t>(clampi(i + t, h)) *
                                      static_cast<std::size_t>(w) +
                                  static_cast<std::size_t>(j)];
            const long rounded = std::lround(acc);
            out.at(i, j) = static_cast<std::uint8_t>(std::clamp(rounded, 0L, 255L));
        }
    }
    return out;
}

OccupancyGrid binarize(const OccupancyGrid& grid, int kappa) {
    if (kappa < 0 || kappa > 255) throw InvalidArgumentError("kappa must be in [0, 255]");
    OccupancyGrid out = grid;
    for (auto& v : out.cells()) v = (v > kappa) ? kFree : kOccupied;
    return out;
}

namespace {

struct Component {
    int min_row, max_row, min_col, max_col;
    std::vector<std::int32_t> pixels;  // linear indices
};

std::vector<Component> label_free_components(const OccupancyGrid& grid,
                                             std::vector<std::int32_t>& labels) {
    const int h = grid.height(), w = grid.width();
    labels.assign(grid.pixel_count(), -1);
    std::vector<Component> comps;
    std::vector<std::int32_t> stack;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const std::int32_t idx = i * w + j;
            if (grid.at(i, j) != kFree || labels[static_cast<std::size_t>(idx)] >= 0) continue;
            const auto id = static_cast<std::int32_t>(comps.size());
            comps.push_back({i, i, j, j, {}});
            Component& comp = comps.back();
            labels[static_cast<std::size_t>(idx)] = id;
            stack.assign(1, idx);
            while (!stack.empty()) {
                const std::int32_t cur = stack.back();
                stack.pop_back();
                comp.pixels.push_back(cur);
                const int r = cur / w, c = cur % w;
                comp.min_row = std::min(comp.min_row, r);
                comp.max_row = std::max(comp.max_row, r);
                comp.min_col = std::min(comp.min_col, c);
                comp.max_col = std::max(comp.max_col, c);
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int nr = r + dr, nc = c + dc;
                        if (!grid.in_bounds(nr, nc) || grid.at(nr, nc) != kFree) continue;
                        const std::int32_t nidx = nr * w + nc;
                        if (labels[static_cast<std::size_t>(nidx)] >= 0) continue;
                        labels[static_cast<std::size_t>(nidx)] = id;
                        stack.push_back(nidx);
                    }
                }
            }
            std::sort(comp.pixels.begin(), comp.pixels.end());
        }
    }
    return comps;
}

// Filled region of one component: its pixels plus any holes, found by
// flooding the background of the padded bounding box from the box border
// (4-connected, the dual of 8-connected foreground).
std::vector<std::int32_t> filled_region(const OccupancyGrid& grid,
                                        const std::vector<std::int32_t>& labels,
                                        std::int32_t comp_id, const Component& comp) {
    const int w = grid.width();
    const int r0 = comp.min_row - 1, c0 = comp.min_col - 1;
    const int bh = comp.max_row - comp.min_row + 3, bw = comp.max_col - comp.min_col + 3;
    auto local = [&](int r, int c) { return (r - r0) * bw + (c - c0); };

    std::vector<std::uint8_t> outside(static_cast<std::size_t>(bh) * static_cast<std::size_t>(bw),
                                      0);
    std::vector<std::int32_t> stack;
    auto try_push = [&](int r, int c) {
        if (r < r0 || r >= r0 + bh || c < c0 || c >= c0 + bw) return;
        const auto li = static_cast<std::size_t>(local(r, c));
        if (outside[li]) return;
        const bool is_comp = grid.in_bounds(r, c) &&
                             labels[static_cast<std::size_t>(r * w + c)] == comp_id;
        if (is_comp) return;
        outside[li] = 1;
        stack.push_back(local(r, c));
    };
    for (int r = r0; r < r0 + bh; ++r) {
        try_push(r, c0);
        try_push(r, c0 + bw - 1);
    }
    for (int c = c0; c < c0 + bw; ++c) {
        try_push(r0, c);
        try_push(r0 + bh - 1, c);
    }
    while (!stack.empty()) {
        const std::int32_t cur = stack.back();
        stack.pop_back();
        const int r = cur / bw + r0, c = cur % bw + c0;
        try_push(r - 1, c);
        try_push(r + 1, c);
        try_push(r, c - 1);
        try_push(r, c + 1);
    }

    std::vector<std::int32_t> filled;
    for (int r = comp.min_row; r <= comp.max_row; ++r)
        for (int c = comp.min_col; c <= comp.max_col; ++c)
            if (!outside[static_cast<std::size_t>(local(r, c))]) filled.push_back(r * w + c);
    return filled;
}

}  // namespace

OccupancyGrid fill_largest_contour(const OccupancyGrid& grid) {
    std::vector<std::int32_t> labels;
    const auto comps = label_free_components(grid, labels);
    if (comps.empty()) throw EmptyMapError("map has no free cells to contour");

    std::vector<std::int32_t> best_filled;
    for (std::size_t id = 0; id < comps.size(); ++id) {
        auto filled = filled_region(grid, labels, static_cast<std::int32_t>(id), comps[id]);
        // Ties go to the component appearing first in row-major order.
        if (id == 0 || filled.size() > best_filled.size()) best_filled = std::move(filled);
    }

    OccupancyGrid out = grid;
    std::fill(out.cells().begin(), out.cells().end(), kOccupied);
    for (const std::int32_t idx : best_filled)
        out.cells()[static_cast<std::size_t>(idx)] = kFree;
    return out;
}

OccupancyGrid erode(const OccupancyGrid& grid, int erosion_k) {
    if (erosion_k < 1) throw InvalidArgumentError("erosion kernel side must be >= 1");
    const int h = grid.height(), w = grid.width();
    const int anchor = erosion_k / 2;
    const int lo = -anchor, hi = erosion_k - 1 - anchor;

    // Separable sliding minimum; out-of-map cells count as occupied.
    std::vector<std::uint8_t> row_min(grid.pixel_count());
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            std::uint8_t m = 255;
            for (int t = lo; t <= hi; ++t) {
                const int c = j + t;
                const std::uint8_t v = (c < 0 || c >= w) ? kOccupied : grid.at(i, c);
                m = std::min(m, v);
                if (m == 0) break;
            }
            row_min[static_cast<std::size_t>(i * w + j)] = m;
        }
    }
    OccupancyGrid out = grid;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            std::uint8_t m = 255;
            for (int t = lo; t <= hi; ++t) {
                const int r = i + t;
                const std::uint8_t v =
                    (r < 0 || r >= h) ? kOccupied : row_min[static_cast<std::size_t>(r * w + j)];
                m = std::min(m, v);
                if (m == 0) break;
            }
            out.at(i, j) = m;
        }
    }
    return out;
}

namespace {

// Zhang-Suen thinning over a zero-padded working buffer. Both subiterations
// flag pixels against the unmodified snapshot and delete them in one batch;
// only pixels bordering the background can ever be flagged, so the candidate
// set shrinks with the foreground.
class Thinner {
  public:
    Thinner(const OccupancyGrid& grid)
        : h_(grid.height()), w_(grid.width()), stride_(grid.width() + 2),
          buf_(static_cast<std::size_t>(grid.height() + 2) * static_cast<std::size_t>(stride_),
               0) {
        for (int i = 0; i < h_; ++i)
            for (int j = 0; j < w_; ++j)
                if (grid.at(i, j) == kFree) buf_[pad_index(i, j)] = 1;
    }

    void run() {
        std::vector<std::int32_t> candidates = border_pixels();
        std::vector<std::int32_t> flagged;
        bool changed = true;
        while (changed && !candidates.empty()) {
            changed = false;
            for (int sub = 0; sub < 2; ++sub) {
                flagged.clear();
                for (const std::int32_t p : candidates)
                    if (buf_[static_cast<std::size_t>(p)] && deletable(p, sub))
                        flagged.push_back(p);
                if (flagged.empty()) continue;
                changed = true;
                for (const std::int32_t p : flagged) buf_[static_cast<std::size_t>(p)] = 0;
                candidates = next_candidates(candidates, flagged);
            }
        }
    }

    bool alive(int i, int j) const { return buf_[pad_index(i, j)] != 0; }

  private:
    std::size_t pad_index(int i, int j) const {
        return static_cast<std::size_t>(i + 1) * static_cast<std::size_t>(stride_) +
               static_cast<std::size_t>(j + 1);
    }

    // P2..P9 clockwise from north, as offsets in the padded buffer.
    std::array<std::int32_t, 8> ring_offsets() const {
        return {-stride_, -stride_ + 1, 1, stride_ + 1, stride_, stride_ - 1, -1, -stride_ - 1};
    }

    bool deletable(std::int32_t p, int sub) const {
        const auto off = ring_offsets();
        std::array<int, 8> n{};
        int b = 0;
        for (int k = 0; k < 8; ++k) {
            n[static_cast<std::size_t>(k)] = buf_[static_cast<std::size_t>(p + off[static_cast<std::size_t>(k)])];
            b += n[static_cast<std::size_t>(k)];
        }
        if (b < 2 || b > 6) return false;
        int a = 0;
        for (int k = 0; k < 8; ++k)
            if (n[static_cast<std::size_t>(k)] == 0 && n[static_cast<std::size_t>((k + 1) % 8)] == 1) ++a;
        if (a != 1) return false;
        const int p2 = n[0], p4 = n[2], p6 = n[4], p8 = n[6];
        if (sub == 0) return (p2 * p4 * p6) == 0 && (p4 * p6 * p8) == 0;
        return (p2 * p4 * p8) == 0 && (p2 * p6 * p8) == 0;
    }

    bool has_background_neighbor(std::int32_t p) const {
        for (const std::int32_t o : ring_offsets())
            if (!buf_[static_cast<std::size_t>(p + o)]) return true;
        return false;
    }

    std::vector<std::int32_t> border_pixels() const {
        std::vector<std::int32_t> out;
        for (int i = 0; i < h_; ++i)
            for (int j = 0; j < w_; ++j) {
                const auto p = static_cast<std::int32_t>(pad_index(i, j));
                if (buf_[static_cast<std::size_t>(p)] && has_background_neighbor(p))
                    out.push_back(p);
            }
        return out;
    }

    std::vector<std::int32_t> next_candidates(const std::vector<std::int32_t>& old,
                                              const std::vector<std::int32_t>& deleted) const {
        std::vector<std::int32_t> out;
        out.reserve(old.size());
        for (const std::int32_t p : old)
            if (buf_[static_cast<std::size_t>(p)]) out.push_back(p);
        for (const std::int32_t d : deleted)
            for (const std::int32_t o : ring_offsets())
                if (buf_[static_cast<std::size_t>(d + o)]) out.push_back(d + o);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    int h_, w_, stride_;
    std::vector<std::uint8_t> buf_;
};

}  // namespace

OccupancyGrid skeletonize(const OccupancyGrid& grid) {
    Thinner thinner(grid);
    thinner.run();

    OccupancyGrid out = grid;
    for (int i = 0; i < grid.height(); ++i)
        for (int j = 0; j < grid.width(); ++j)
            out.at(i, j) = thinner.alive(i, j) ? kFree : kOccupied;

    // Thinning can erase a small blob outright (an isolated 2x2 square is
    // the classic case). Reinstate one pixel per vanished input component so
    // the 8-connected component count survives: the pixel nearest the
    // component centroid, ties in row-major order.
    std::vector<std::int32_t> labels;
    const auto comps = label_free_components(grid, labels);
    for (const auto& comp : comps) {
        bool survived = false;
        for (const std::int32_t idx : comp.pixels)
            if (out.cells()[static_cast<std::size_t>(idx)] == kFree) {
                survived = true;
                break;
            }
        if (survived) continue;
        double cr = 0.0, cc = 0.0;
        for (const std::int32_t idx : comp.pixels) {
            cr += idx / grid.width();
            cc += idx % grid.width();
        }
        cr /= static_cast<double>(comp.pixels.size());
        cc /= static_cast<double>(comp.pixels.size());
        std::int32_t best = comp.pixels.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (const std::int32_t idx : comp.pixels) {
            const double dr = idx / grid.width() - cr, dc = idx % grid.width() - cc;
            const double d = dr * dr + dc * dc;
            if (d < best_d) {
                best_d = d;
                best = idx;
            }
        }
        out.cells()[static_cast<std::size_t>(best)] = kFree;
    }
    return out;
}

WaypointSet extract_waypoints(const OccupancyGrid& grid, AxisOrder axis) {
    WaypointSet set;
    set.resolution = grid.resolution();
    set.origin = grid.origin();
    set.axis = axis;
    const double r = grid.resolution();
    const Vec2 o = grid.origin();
    for (int i = 0; i < grid.height(); ++i) {
        for (int j = 0; j < grid.width(); ++j) {
            if (grid.at(i, j) != kFree) continue;
            const double a = r * static_cast<double>(i);
            const double b = r * static_cast<double>(j);
            if (axis == AxisOrder::RowCol)
                set.points.push_back({a + o.x, b + o.y});
            else
                set.points.push_back({b + o.x, a + o.y});
            set.source_pixels.push_back({i, j});
        }
    }
    return set;
}

const std::vector<std::string>& stage_names() {
    static const std::vector<std::string> names = {"original", "adjusted", "fuzzied",
                                                   "contour",  "eroded",   "skeleton"};
    return names;
}

WaypointSet read_map(const OccupancyGrid& grid, const ReaderParams& params, AxisOrder axis,
                     const std::optional<std::filesystem::path>& stages_dir) {
    params.validate();
    if (!grid.is_tri_level())
        throw ValidationError("read_map expects a tri-level {0, 128, 255} map");

    auto dump = [&](const OccupancyGrid& g, const std::string& name) {
        if (stages_dir) save_stage(g, name, *stages_dir);
    };

    dump(grid, "original");
    const OccupancyGrid adjusted = fold_unknown(grid);
    dump(adjusted, "adjusted");
    const OccupancyGrid fuzzied = gaussian_smooth(adjusted, params.sigma);
    dump(fuzzied, "fuzzied");
    const OccupancyGrid crisp = binarize(fuzzied, params.kappa);
    const OccupancyGrid contour = fill_largest_contour(crisp);
    dump(contour, "contour");
    const OccupancyGrid eroded = erode(contour, params.erosion_k);
    dump(eroded, "eroded");
    if (eroded.count_value(kFree) == 0)
        throw EmptySkeletonError("free space vanished after erosion (kernel " +
                                     std::to_string(params.erosion_k) + ")",
                                 "eroded");
    const OccupancyGrid skeleton = skeletonize(eroded);
    dump(skeleton, "skeleton");
    return extract_waypoints(skeleton, axis);
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_waypoints(const WaypointSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write waypoint file: " + path.string());
    out << "count=" << set.points.size() << " resolution=" << format_double(set.resolution)
        << " origin_x=" << format_double(set.origin.x)
        << " origin_y=" << format_double(set.origin.y)
        << " axis=" << (set.axis == AxisOrder::RowCol ? "row-col" : "col-row") << "\n";
    for (const Vec2& p : set.points)
        out << format_double(p.x) << " " << format_double(p.y) << "\n";
    if (!out) throw IoError("failed writing waypoints: " + path.string());
}

WaypointSet load_waypoints(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open waypoint file: " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw FormatError("waypoint file is empty: " + path.string());

    WaypointSet set;
    std::size_t count = 0;
    bool have_count = false, have_res = false, have_ox = false, have_oy = false;
    std::istringstream hs(header);
    std::string token;
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw FormatError("bad waypoint header token: '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "count") {
                count = std::stoul(value);
                have_count = true;
            } else if (key == "resolution") {
                set.resolution = std::stod(value);
                have_res = true;
            } else if (key == "origin_x") {
                set.origin.x = std::stod(value);
                have_ox = true;
            } else if (key == "origin_y") {
                set.origin.y = std::stod(value);
                have_oy = true;
            } else if (key == "axis") {
                if (value == "row-col")
                    set.axis = AxisOrder::RowCol;
                else if (value == "col-row")
                    set.axis = AxisOrder::ColRow;
                else
                    throw FormatError("unknown axis order: '" + value + "'");
            }
        } catch (const std::logic_error&) {
            throw FormatError("bad waypoint header value: '" + token + "'");
        }
    }
    if (!have_count || !have_res || !have_ox || !have_oy)
        throw FormatError("waypoint header must carry count, resolution, origin_x, origin_y");
    if (!(set.resolution > 0.0)) throw ValidationError("waypoint resolution must be > 0");

    double x = 0.0, y = 0.0;
    while (in >> x >> y) {
        set.points.push_back({x, y});
        const double a = (x - set.origin.x) / set.resolution;
        const double b = (y - set.origin.y) / set.resolution;
        const double pr = set.axis == AxisOrder::RowCol ? a : b;
        const double pc = set.axis == AxisOrder::RowCol ? b : a;
        const double ri = std::round(pr), ci = std::round(pc);
        if (std::abs(pr - ri) > 1e-6 || std::abs(pc - ci) > 1e-6)
            throw FormatError("waypoint (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") does not sit on the pixel lattice");
        set.source_pixels.push_back({static_cast<int>(ri), static_cast<int>(ci)});
    }
    if (set.points.size() != count)
        throw FormatError("waypoint count mismatch: header says " + std::to_string(count) +
                          ", file has " + std::to_string(set.points.size()));
    return set;
}

}  // namespace covpath
