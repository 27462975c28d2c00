#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covpath/path_planner.hpp"
#include "covpath/sim_world.hpp"

namespace covpath {

enum class NavState {
    LoadMap,
    CheckWaypoints,
    CheckDestination,
    Move,
    Scan,
    ManualControl,
    Home,
    Done,
};

enum class NavEvent {
    MapLoaded,
    WaypointsRemaining,
    NoWaypoints,
    AtDestination,
    NotAtDestination,
    NavSuccess,
    NavTimeout,
    OperatorInterrupt,
    OperatorRelease,
    ScanDone,
    HomeReached,
};

std::string_view to_string(NavState state);
std::string_view to_string(NavEvent event);

/// The transition table; nullopt when the event is not legal in the state.
std::optional<NavState> transition(NavState state, NavEvent event);

/// Mission state machine. step() applies the table or throws
/// RejectedEventError leaving the state unchanged.
class Fsm {
  public:
    NavState state() const { return state_; }
    NavState step(NavEvent event);

  private:
    NavState state_{NavState::LoadMap};
};

struct ScanParams {
    int orientations{1};                 // N
    std::vector<std::string> gestures;   // G, ordered

    void validate() const;
};

struct MissionConfig {
    Tolerance tol{};
    std::optional<ScanParams> scan;   // nullopt: Scan state is a no-op
    std::vector<double> interrupts;   // mission times (s) of operator takeovers
    int max_retries{5};               // Move attempts per waypoint before conceding
    double assist_delay{1.0};         // s the operator "drives" during ManualControl
};

struct LogEvent {
    double t{0.0};
    NavState state;        // state entered
    std::string event;
    std::string detail;
};

struct ScanCapture {
    double t{0.0};
    Pose2D pose;           // perceived pose at capture
    double heading_target{0.0};
    std::string gesture;
    bool ok{true};
};

struct WaypointOutcome {
    std::size_t index{0};
    Pose2D goal;
    double t_start{0.0};
    double t_end{0.0};
    bool reached{false};
    bool assisted{false};
    int timeouts{0};
    bool goal_blocked{false};  // perceived goal or its approach sat in occupied space

    double duration() const { return t_end - t_start; }
};

struct RunLog {
    std::vector<LogEvent> events;
    std::vector<WaypointOutcome> waypoints;
    std::vector<ScanCapture> captures;
    double total_time{0.0};
    bool aborted{false};
    std::string abort_reason;
};

/// Drive the FSM over the spliced path until Done (or a simulator fault,
/// which aborts with a partial log). Goal yaw at each waypoint is the
/// bearing from the previous one.
RunLog run_mission(World& world, const PlannedPath& path, const MissionConfig& config);

/// N x |G| captures: for each of N headings spaced 2*pi/N, perform every
/// gesture and record a snapshot. A failed rotation truncates the list with
/// the failure marked.
std::vector<ScanCapture> scan_at_waypoint(World& world, const ScanParams& params,
                                          const Tolerance& tol = {});

struct MissionMetrics {
    std::size_t total_waypoints{0};
    std::size_t reached{0};
    double reachability_pct{0.0};
    double total_time{0.0};
    double median_waypoint_time{0.0};
    double mean_waypoint_time{0.0};
    std::vector<double> waypoint_times;
    std::vector<std::string> observations;
};

MissionMetrics mission_metrics(const RunLog& log);

/// Aligned-column report: reachability, total time, median time per
/// waypoint and the observations column.
std::string format_report(const MissionMetrics& metrics);

/// Line records `t state event detail`.
void save_runlog(const RunLog& log, const std::filesystem::path& path);

}  // namespace covpath
