#include "covpath/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "covpath/errors.hpp"

namespace covpath {

void SimConfig::validate() const {
    if (!(max_vx > 0.0) || !(max_vy > 0.0) || !(max_wz > 0.0))
        throw InvalidArgumentError("velocity limits must be positive");
    if (!(dt > 0.0) || dt > 0.1)
        throw InvalidArgumentError("integration step dt must be in (0, 0.1]");
    if (robot_radius < 0.0) throw InvalidArgumentError("robot radius must be >= 0");
    if (drift_rate < 0.0) throw InvalidArgumentError("drift rate must be >= 0");
}

BodyTransform project_base_footprint(const BodyTransform& body) {
    if (!is_rotation(body.rotation))
        throw ValidationError("body rotation is not orthonormal with determinant +1");
    BodyTransform footprint;
    footprint.rotation = body.rotation.transposed();
    footprint.translation = footprint.rotation * Vec3{0.0, 0.0, -body.translation.z};
    return footprint;
}

Joystick velocity_to_joystick(const Vec3& linear, const Vec3& angular, const SimConfig& config) {
    config.validate();
    // Joystick axes live in the open interval (-1, 1).
    const double limit = std::nextafter(1.0, 0.0);
    auto squeeze = [limit](double v) { return std::clamp(v, -limit, limit); };
    Joystick j;
    j.ly = squeeze(linear.x / config.max_vx);
    j.lx = squeeze(-linear.y / config.max_vy);
    j.rx = squeeze(-angular.z / config.max_wz);
    j.ry = 0.0;
    return j;
}

namespace {

// splitmix64 feeding Box-Muller; self-contained so seeded runs reproduce
// across standard libraries.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

constexpr double kDriftStride = 1.0;  // s between heading-bias steps
constexpr double kDockRadius = 2.0;   // m: switch from cruising to docking

}  // namespace

double World::gaussian_sample() {
    const double u1 = 1.0 - uniform01(rng_state_);
    const double u2 = uniform01(rng_state_);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

World::World(OccupancyGrid map, SimConfig config, Pose2D start, AxisOrder axis)
    : map_(std::move(map)), config_(config), axis_(axis), start_pose_(start), true_pose_(start),
      drift_anchor_(start.position()), rng_state_(config.seed ^ 0xC0FFEE5EED5ULL) {
    config_.validate();
    if (!in_bounds_world(start.position()))
        throw InvalidArgumentError("start pose lies outside the map");
    trace_.push_back({0.0, true_pose_, true_pose_});
}

Pose2D World::perceived_pose() const {
    if (heading_bias_ == 0.0) return true_pose_;
    const double c = std::cos(heading_bias_), s = std::sin(heading_bias_);
    const Vec2 rel = true_pose_.position() - drift_anchor_;
    return {drift_anchor_.x + c * rel.x - s * rel.y, drift_anchor_.y + s * rel.x + c * rel.y,
            wrap_angle(true_pose_.psi + heading_bias_)};
}

Vec2 World::drift_adjusted(Vec2 map_point) const {
    if (heading_bias_ == 0.0) return map_point;
    const double c = std::cos(-heading_bias_), s = std::sin(-heading_bias_);
    const Vec2 rel = map_point - drift_anchor_;
    return {drift_anchor_.x + c * rel.x - s * rel.y, drift_anchor_.y + s * rel.x + c * rel.y};
}

Pose2D World::drift_adjusted(const Pose2D& map_pose) const {
    const Vec2 p = drift_adjusted(map_pose.position());
    return {p.x, p.y, wrap_angle(map_pose.psi - heading_bias_)};
}

bool World::in_bounds_world(Vec2 p) const {
    const double r = map_.resolution();
    const Vec2 o = map_.origin();
    const double a = (p.x - o.x) / r, b = (p.y - o.y) / r;
    const double row = axis_ == AxisOrder::RowCol ? a : b;
    const double col = axis_ == AxisOrder::RowCol ? b : a;
    return row >= -0.5 && row < map_.height() - 0.5 && col >= -0.5 && col < map_.width() - 0.5;
}

bool World::position_blocked(Vec2 p) const {
    const double res = map_.resolution();
    const Vec2 o = map_.origin();
    const double a = (p.x - o.x) / res, b = (p.y - o.y) / res;
    const double row = axis_ == AxisOrder::RowCol ? a : b;
    const double col = axis_ == AxisOrder::RowCol ? b : a;
    const int reach = static_cast<int>(std::ceil(config_.robot_radius / res)) + 1;
    const int r0 = static_cast<int>(std::floor(row)) - reach;
    const int c0 = static_cast<int>(std::floor(col)) - reach;
    const double radius2 = config_.robot_radius * config_.robot_radius;
    for (int i = r0; i <= r0 + 2 * reach + 1; ++i) {
        for (int j = c0; j <= c0 + 2 * reach + 1; ++j) {
            const double dr = (static_cast<double>(i) - row) * res;
            const double dc = (static_cast<double>(j) - col) * res;
            if (dr * dr + dc * dc > radius2) continue;
            // Cells beyond the map edge block, as does anything not free.
            if (!map_.in_bounds(i, j) || map_.at(i, j) != kFree) return true;
        }
    }
    return false;
}

bool World::segment_blocked(Vec2 a, Vec2 b) const {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / (0.5 * map_.resolution()))));
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        if (position_blocked({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)})) return true;
    }
    return false;
}

Pose2D World::inject_drift(double dt) {
    // Brownian heading bias, discretized at 1 s strides: each stride adds a
    // Gaussian step of standard deviation drift_rate * sqrt(stride). Real
    // map drift is slow, so the bias holds still between strides instead of
    // vibrating at the integration rate.
    if (config_.drift_rate > 0.0) {
        drift_pending_ += dt;
        while (drift_pending_ >= kDriftStride) {
            drift_pending_ -= kDriftStride;
            heading_bias_ +=
                config_.drift_rate * std::sqrt(kDriftStride) * gaussian_sample();
        }
    }
    return perceived_pose();
}

void World::step(double vx, double vy, double wz) {
    vx = std::clamp(vx, -config_.max_vx, config_.max_vx);
    vy = std::clamp(vy, -config_.max_vy, config_.max_vy);
    wz = std::clamp(wz, -config_.max_wz, config_.max_wz);

    const double dt = config_.dt;
    const double c = std::cos(true_pose_.psi), s = std::sin(true_pose_.psi);
    const Vec2 next{true_pose_.x + (vx * c - vy * s) * dt, true_pose_.y + (vx * s + vy * c) * dt};
    // Never step into a wall; rotation and time still advance.
    if (vx != 0.0 || vy != 0.0) {
        if (position_blocked(next)) {
            step_refused_ = true;
        } else {
            true_pose_.x = next.x;
            true_pose_.y = next.y;
        }
    }
    true_pose_.psi = wrap_angle(true_pose_.psi + wz * dt);
    time_ += dt;
    inject_drift(dt);
    trace_.push_back({time_, true_pose_, perceived_pose()});
}

GotoResult World::goto_pose(const Pose2D& goal, const Tolerance& tol, double timeout,
                            std::optional<double> abort_at) {
    tol.validate();
    if (!in_bounds_world(goal.position()))
        throw InvalidArgumentError("navigation goal lies outside the map");

    last_goto_blocked_ = false;
    step_refused_ = false;
    const double t_start = time_;
    while (true) {
        if (step_refused_) last_goto_blocked_ = true;
        if (at_destination(perceived_pose(), goal, tol)) return GotoResult::Success;
        if (abort_at && time_ >= *abort_at) return GotoResult::Interrupted;
        if (time_ - t_start >= timeout) return GotoResult::Timeout;

        const Pose2D target = drift_adjusted(goal);
        if (segment_blocked(true_pose_.position(), target.position())) {
            // The planner stand-in finds no clear route; wait out the clock.
            last_goto_blocked_ = true;
            step(0.0, 0.0, 0.0);
            continue;
        }
        const double dist = distance(true_pose_.position(), target.position());
        if (dist > kDockRadius) {
            // Cruise: face the goal, drive forward scaled by the alignment.
            const double bearing =
                std::atan2(target.y - true_pose_.y, target.x - true_pose_.x);
            const double heading_err = wrap_angle(bearing - true_pose_.psi);
            const double vx = std::abs(heading_err) < M_PI / 2.0
                                  ? kGotoLinearGain * dist * std::cos(heading_err)
                                  : 0.0;
            step(vx, 0.0, kGotoAngularGain * heading_err);
        } else {
            // Dock: holonomic position tracking while the yaw aligns to the
            // goal orientation.
            const double dx = target.x - true_pose_.x, dy = target.y - true_pose_.y;
            const double c = std::cos(true_pose_.psi), s = std::sin(true_pose_.psi);
            const double vx = kGotoLinearGain * (dx * c + dy * s);
            const double vy = kGotoLinearGain * (-dx * s + dy * c);
            const double yaw_err = wrap_angle(target.psi - true_pose_.psi);
            step(vx, vy, kGotoAngularGain * yaw_err);
        }
    }
}

void World::teleport_to_perceived(const Pose2D& goal) {
    true_pose_ = drift_adjusted(goal);
    trace_.push_back({time_, true_pose_, perceived_pose()});
}

void World::idle(double seconds) {
    const int n = std::max(0, static_cast<int>(std::lround(seconds / config_.dt)));
    for (int i = 0; i < n; ++i) step(0.0, 0.0, 0.0);
}

void World::save_trace(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace file: " + path.string());
    char line[256];
    for (const TraceSample& s : trace_) {
        std::snprintf(line, sizeof(line), "%.3f %.6f %.6f %.6f %.6f %.6f %.6f\n", s.t,
                      s.true_pose.x, s.true_pose.y, s.true_pose.psi, s.perceived.x,
                      s.perceived.y, s.perceived.psi);
        out << line;
    }
    if (!out) throw IoError("failed writing trace file: " + path.string());
}

// ---------------------------------------------------------------- synthetic

std::optional<MapShape> parse_map_shape(std::string_view name) {
    if (name == "l-room" || name == "lroom" || name == "l_room") return MapShape::LRoom;
    if (name == "corridor") return MapShape::Corridor;
    if (name == "annulus") return MapShape::Annulus;
    if (name == "random-rects" || name == "random_rects") return MapShape::RandomRects;
    return std::nullopt;
}

namespace {

struct RectPx {
    int r0, c0, r1, c1;  // inclusive
};

void mark_free(std::vector<std::uint8_t>& mask, int w, const RectPx& rect) {
    for (int r = rect.r0; r <= rect.r1; ++r)
        for (int c = rect.c0; c <= rect.c1; ++c)
            mask[static_cast<std::size_t>(r * w + c)] = 1;
}

}  // namespace

OccupancyGrid generate_synthetic_map(MapShape shape, int width, int height, double resolution,
                                     std::uint64_t seed) {
    if (width < 16 || height < 16)
        throw InvalidArgumentError("synthetic maps need at least 16x16 pixels");
    if (!(resolution > 0.0)) throw InvalidArgumentError("resolution must be > 0");

    MapMetadata meta;
    meta.resolution = resolution;
    meta.origin = {-resolution * static_cast<double>(height - 1) / 2.0,
                   -resolution * static_cast<double>(width - 1) / 2.0};

    const int m = std::max(3, std::min(width, height) / 10);
    std::vector<std::uint8_t> free_mask(
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    std::uint64_t rng = seed ^ 0xA11CE5EEDULL;

    switch (shape) {
        case MapShape::LRoom: {
            meta.name = "l-room";
            const int wing_w = std::max(4, (width - 2 * m) * 2 / 5);
            const int wing_h = std::max(4, (height - 2 * m) * 2 / 5);
            mark_free(free_mask, width, {m, m, height - 1 - m, m + wing_w});
            mark_free(free_mask, width, {height - 1 - m - wing_h, m, height - 1 - m, width - 1 - m});
            // Two alcoves off the wings; their dead ends grow skeleton
            // branches the way real room corners do.
            mark_free(free_mask, width,
                      {height / 5, std::max(3, m / 3), height * 7 / 20, m});
            mark_free(free_mask, width, {height - 1 - m, width * 3 / 5,
                                         std::min(height - 3, height - 1 - m / 3),
                                         width * 3 / 4});
            break;
        }
        case MapShape::Corridor: {
            meta.name = "corridor";
            const int cw = std::max(12, height / 3);
            const int r0 = (height - cw) / 2;
            mark_free(free_mask, width, {r0, m, r0 + cw - 1, width - 1 - m});
            break;
        }
        case MapShape::Annulus: {
            meta.name = "annulus";
            const double cr = (height - 1) / 2.0, cc = (width - 1) / 2.0;
            const double outer = std::min(width, height) / 2.0 - m;
            const double inner = outer * 0.5;
            for (int r = 0; r < height; ++r)
                for (int c = 0; c < width; ++c) {
                    const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
                    if (d2 <= outer * outer && d2 >= inner * inner)
                        free_mask[static_cast<std::size_t>(r * width + c)] = 1;
                }
            break;
        }
        case MapShape::RandomRects: {
            meta.name = "random-rects";
            auto rand_int = [&rng](int lo, int hi) {
                return lo + static_cast<int>(splitmix64(rng) % static_cast<std::uint64_t>(hi - lo + 1));
            };
            const int max_side = std::max(6, std::min(width, height) / 3);
            RectPx cur{height / 2, width / 2, 0, 0};
            int anchor_r = height / 2, anchor_c = width / 2;
            const int count = rand_int(3, 6);
            for (int k = 0; k < count; ++k) {
                const int rh = rand_int(max_side / 2, max_side);
                const int rw = rand_int(max_side / 2, max_side);
                cur.r0 = std::clamp(anchor_r - rh / 2, m, height - 1 - m);
                cur.c0 = std::clamp(anchor_c - rw / 2, m, width - 1 - m);
                cur.r1 = std::clamp(cur.r0 + rh, m, height - 1 - m);
                cur.c1 = std::clamp(cur.c0 + rw, m, width - 1 - m);
                mark_free(free_mask, width, cur);
                anchor_r = rand_int(cur.r0, cur.r1);
                anchor_c = rand_int(cur.c0, cur.c1);
            }
            break;
        }
    }

    OccupancyGrid grid(width, height, kUnknown, meta);
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (free_mask[static_cast<std::size_t>(r * width + c)]) grid.at(r, c) = kFree;

    // Two-pixel wall ring around the free space; everything beyond stays
    // unknown, the way raycast mapping leaves the outside world.
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            if (grid.at(r, c) == kFree) continue;
            bool near_free = false;
            for (int dr = -2; dr <= 2 && !near_free; ++dr)
                for (int dc = -2; dc <= 2 && !near_free; ++dc) {
                    const int nr = r + dr, nc = c + dc;
                    if (grid.in_bounds(nr, nc) &&
                        free_mask[static_cast<std::size_t>(nr * width + nc)])
                        near_free = true;
                }
            if (near_free) grid.at(r, c) = kOccupied;
        }
    }

    if (shape == MapShape::RandomRects) {
        // Sensor-noise speckle along the boundary.
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) {
                if (grid.at(r, c) != kFree) continue;
                bool near_wall = false;
                for (int dr = -2; dr <= 2 && !near_wall; ++dr)
                    for (int dc = -2; dc <= 2 && !near_wall; ++dc) {
                        const int nr = r + dr, nc = c + dc;
                        if (grid.in_bounds(nr, nc) && grid.at(nr, nc) == kOccupied)
                            near_wall = true;
                    }
                if (near_wall && uniform01(rng) < 0.02) grid.at(r, c) = kUnknown;
            }
    }
    return grid;
}

WaypointSet make_comb_waypoints(std::size_t count, double resolution) {
    if (!(resolution > 0.0)) throw InvalidArgumentError("resolution must be > 0");
    WaypointSet set;
    set.resolution = resolution;
    set.origin = {0.0, 0.0};

    if (count == 0) return set;
    const std::size_t branch_len = 8;
    const std::size_t branches = count >= 100 ? 6 : (count >= 24 ? 2 : 0);
    const std::size_t spine = count - branches * branch_len;

    auto push = [&](int row, int col) {
        set.points.push_back({resolution * static_cast<double>(row),
                              resolution * static_cast<double>(col)});
        set.source_pixels.push_back({row, col});
    };
    for (std::size_t c = 0; c < spine; ++c) push(0, static_cast<int>(c));
    for (std::size_t b = 0; b < branches; ++b) {
        const int col = static_cast<int>((b + 1) * spine / (branches + 1));
        for (std::size_t r = 1; r <= branch_len; ++r) push(static_cast<int>(r), col);
    }
    return set;
}

}  // namespace covpath
