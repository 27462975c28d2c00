#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "covpath/map_reader.hpp"
#include "covpath/occupancy_grid.hpp"

namespace covpath {

struct SimConfig {
    double max_vx{1.0};        // m/s, forward
    double max_vy{0.5};        // m/s, lateral
    double max_wz{0.8};        // rad/s, yaw
    double dt{0.01};           // s, integration step; must be in (0, 0.1]
    double robot_radius{0.35};  // m, collision disc
    double drift_rate{0.0};    // rad/sqrt(s) heading-bias random walk; 0 disables
    std::uint64_t seed{0};

    void validate() const;
};

/// Rigid transform of the robot body w.r.t. the inertial frame.
struct BodyTransform {
    Mat3 rotation;     // orthonormal, det +1
    Vec3 translation;  // meters; z is the body height
};

/// Footprint-w.r.t.-body transform: the footprint frame keeps the inertial
/// orientation, so the rotation is the inverse of the body rotation and the
/// translation drops the body straight down by z.
BodyTransform project_base_footprint(const BodyTransform& body);

struct Joystick {
    double lx{0.0};
    double ly{0.0};
    double rx{0.0};
    double ry{0.0};
};

/// Map commanded body velocities onto the wireless-controller axes,
/// normalized by the configured velocity limits and clamped inside (-1, 1).
Joystick velocity_to_joystick(const Vec3& linear, const Vec3& angular, const SimConfig& config);

enum class GotoResult { Success, Timeout, Interrupted };

// Proportional gains of the go-to-pose controller.
inline constexpr double kGotoLinearGain = 4.0;   // 1/s
inline constexpr double kGotoAngularGain = 2.5;  // 1/s

struct TraceSample {
    double t{0.0};
    Pose2D true_pose;
    Pose2D perceived;
};

/// Deterministic kinematic world: go-to-pose control under velocity limits,
/// collision checks against the loaded map inflated by the robot radius, and
/// a seeded heading-bias drift model standing in for map drift.
class World {
  public:
    World(OccupancyGrid map, SimConfig config, Pose2D start, AxisOrder axis = AxisOrder::RowCol);

    double time() const { return time_; }
    const Pose2D& true_pose() const { return true_pose_; }
    Pose2D perceived_pose() const;
    double heading_bias() const { return heading_bias_; }
    const OccupancyGrid& map() const { return map_; }
    const SimConfig& config() const { return config_; }
    const Pose2D& start_pose() const { return start_pose_; }

    /// Rotate-toward-goal, translate, final-rotate controller. Succeeds when
    /// the perceived pose reaches the goal within tolerance; a goal whose
    /// straight segment is blocked idles until the timeout. abort_at is an
    /// absolute world time at which an operator interrupt fires.
    GotoResult goto_pose(const Pose2D& goal, const Tolerance& tol, double timeout,
                         std::optional<double> abort_at = {});

    /// True when occupied space stopped the most recent goto_pose attempt:
    /// the straight segment to the adjusted goal was blocked, or the
    /// collision guard refused a step.
    bool last_goto_blocked() const { return last_goto_blocked_; }

    /// Advance only the drift random walk and report the perceived pose.
    Pose2D inject_drift(double dt);

    /// Operator assist: place the robot so its perceived pose equals `goal`.
    void teleport_to_perceived(const Pose2D& goal);

    /// Advance time with zero commanded velocity.
    void idle(double seconds);

    // Drift frame helpers: where a map-frame goal really sits in the world.
    Vec2 drift_adjusted(Vec2 map_point) const;
    Pose2D drift_adjusted(const Pose2D& map_pose) const;

    bool in_bounds_world(Vec2 p) const;
    bool position_blocked(Vec2 p) const;
    bool segment_blocked(Vec2 a, Vec2 b) const;

    const std::vector<TraceSample>& trace() const { return trace_; }
    void save_trace(const std::filesystem::path& path) const;

  private:
    void step(double vx, double vy, double wz);
    double gaussian_sample();

    OccupancyGrid map_;
    SimConfig config_;
    AxisOrder axis_{AxisOrder::RowCol};
    Pose2D start_pose_;
    Pose2D true_pose_;
    double heading_bias_{0.0};
    double drift_pending_{0.0};
    Vec2 drift_anchor_{};
    double time_{0.0};
    std::uint64_t rng_state_{0};
    bool last_goto_blocked_{false};
    bool step_refused_{false};
    std::vector<TraceSample> trace_;
};

enum class MapShape { LRoom, Corridor, Annulus, RandomRects };

std::optional<MapShape> parse_map_shape(std::string_view name);

/// Deterministic tri-level maps with a free interior, a thin occupied wall
/// and an unknown exterior; RandomRects adds seeded boundary speckle.
OccupancyGrid generate_synthetic_map(MapShape shape, int width, int height, double resolution,
                                     std::uint64_t seed);

/// Skeleton-like waypoint chain with a fixed number of side branches, used
/// to benchmark the planner at a given vertex count.
WaypointSet make_comb_waypoints(std::size_t count, double resolution);

}  // namespace covpath
