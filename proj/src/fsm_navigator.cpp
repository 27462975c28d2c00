#include "covpath/fsm_navigator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

#include "covpath/errors.hpp"

namespace covpath {

std::string_view to_string(NavState state) {
    switch (state) {
        case NavState::LoadMap: return "load_map";
        case NavState::CheckWaypoints: return "check_waypoints";
        case NavState::CheckDestination: return "check_destination";
        case NavState::Move: return "move";
        case NavState::Scan: return "scan";
        case NavState::ManualControl: return "manual_control";
        case NavState::Home: return "home";
        case NavState::Done: return "done";
    }
    return "?";
}

std::string_view to_string(NavEvent event) {
    switch (event) {
        case NavEvent::MapLoaded: return "map_loaded";
        case NavEvent::WaypointsRemaining: return "waypoints_remaining";
        case NavEvent::NoWaypoints: return "no_waypoints";
        case NavEvent::AtDestination: return "at_dest";
        case NavEvent::NotAtDestination: return "not_at_dest";
        case NavEvent::NavSuccess: return "nav_success";
        case NavEvent::NavTimeout: return "nav_timeout";
        case NavEvent::OperatorInterrupt: return "operator_interrupt";
        case NavEvent::OperatorRelease: return "operator_release";
        case NavEvent::ScanDone: return "scan_done";
        case NavEvent::HomeReached: return "home_reached";
    }
    return "?";
}

std::optional<NavState> transition(NavState state, NavEvent event) {
    switch (state) {
        case NavState::LoadMap:
            if (event == NavEvent::MapLoaded) return NavState::CheckWaypoints;
            break;
        case NavState::CheckWaypoints:
            if (event == NavEvent::WaypointsRemaining) return NavState::CheckDestination;
            if (event == NavEvent::NoWaypoints) return NavState::Home;
            break;
        case NavState::CheckDestination:
            if (event == NavEvent::AtDestination) return NavState::Scan;
            if (event == NavEvent::NotAtDestination) return NavState::Move;
            break;
        case NavState::Move:
            if (event == NavEvent::NavSuccess) return NavState::CheckDestination;
            if (event == NavEvent::NavTimeout) return NavState::CheckDestination;
            if (event == NavEvent::OperatorInterrupt) return NavState::ManualControl;
            break;
        case NavState::ManualControl:
            if (event == NavEvent::OperatorRelease) return NavState::Scan;
            break;
        case NavState::Scan:
            if (event == NavEvent::ScanDone) return NavState::CheckWaypoints;
            break;
        case NavState::Home:
            if (event == NavEvent::HomeReached) return NavState::Done;
            break;
        case NavState::Done:
            break;
    }
    return std::nullopt;
}

NavState Fsm::step(NavEvent event) {
    const auto next = transition(state_, event);
    if (!next)
        throw RejectedEventError("event " + std::string(to_string(event)) +
                                 " rejected in state " + std::string(to_string(state_)));
    state_ = *next;
    return state_;
}

void ScanParams::validate() const {
    if (orientations < 1) throw InvalidArgumentError("scan orientations must be >= 1");
    if (gestures.empty()) throw InvalidArgumentError("scan gesture list must be nonempty");
}

namespace {

constexpr double kGestureDuration = 0.5;  // s per gesture in simulation

std::string format_trimmed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    }
    return s;
}

}  // namespace

std::vector<ScanCapture> scan_at_waypoint(World& world, const ScanParams& params,
                                          const Tolerance& tol) {
    params.validate();
    std::vector<ScanCapture> captures;
    const Pose2D origin_pose = world.perceived_pose();
    const int n = params.orientations;
    for (int k = 0; k < n; ++k) {
        const double heading =
            wrap_angle(origin_pose.psi + 2.0 * M_PI * static_cast<double>(k) /
                                             static_cast<double>(n));
        if (k > 0) {
            const Pose2D rot_goal{origin_pose.x, origin_pose.y, heading};
            if (world.goto_pose(rot_goal, tol, tol.timeout) != GotoResult::Success) {
                captures.push_back({world.time(), world.perceived_pose(), heading,
                                    "(rotation failed)", false});
                return captures;
            }
        }
        for (const std::string& gesture : params.gestures) {
            world.idle(kGestureDuration);
            captures.push_back({world.time(), world.perceived_pose(), heading, gesture, true});
        }
    }
    return captures;
}

RunLog run_mission(World& world, const PlannedPath& path, const MissionConfig& config) {
    config.tol.validate();
    if (config.scan) config.scan->validate();

    RunLog log;
    Fsm fsm;
    log.events.push_back({world.time(), fsm.state(), "init", "mission start"});
    auto fire = [&](NavEvent event, std::string detail) {
        const NavState entered = fsm.step(event);
        log.events.push_back(
            {world.time(), entered, std::string(to_string(event)), std::move(detail)});
    };

    // Goal yaw at each waypoint is the bearing from its predecessor.
    std::deque<Pose2D> pending;
    Vec2 prev = world.start_pose().position();
    for (const Vec2& wp : path.spliced_path) {
        const double yaw = (wp.x == prev.x && wp.y == prev.y)
                               ? 0.0
                               : std::atan2(wp.y - prev.y, wp.x - prev.x);
        pending.push_back({wp.x, wp.y, yaw});
        prev = wp;
    }

    std::vector<double> interrupts = config.interrupts;
    std::sort(interrupts.begin(), interrupts.end());
    std::size_t next_interrupt = 0;

    WaypointOutcome outcome;
    Pose2D goal;
    std::size_t waypoint_index = 0;
    int retries = 0;
    bool outcome_open = false;

    auto close_outcome = [&](bool reached, bool via_assist) {
        outcome.reached = reached;
        outcome.assisted = outcome.assisted || via_assist;
        outcome.t_end = world.time();
        const Pose2D target = world.drift_adjusted(goal);
        if (world.position_blocked(target.position()) ||
            world.segment_blocked(world.true_pose().position(), target.position()))
            outcome.goal_blocked = true;
        log.waypoints.push_back(outcome);
        outcome_open = false;
    };

    try {
        fire(NavEvent::MapLoaded, "plan with " + std::to_string(path.spliced_path.size()) +
                                      " waypoints loaded");
        while (fsm.state() != NavState::Done) {
            switch (fsm.state()) {
                case NavState::CheckWaypoints: {
                    if (pending.empty()) {
                        fire(NavEvent::NoWaypoints, "all waypoints handled");
                        break;
                    }
                    goal = pending.front();
                    pending.pop_front();
                    outcome = {};
                    outcome.index = waypoint_index++;
                    outcome.goal = goal;
                    outcome.t_start = world.time();
                    outcome_open = true;
                    retries = 0;
                    fire(NavEvent::WaypointsRemaining,
                         "waypoint " + std::to_string(outcome.index) + " -> (" +
                             format_trimmed(goal.x, 3) + ", " + format_trimmed(goal.y, 3) + ")");
                    break;
                }
                case NavState::CheckDestination: {
                    const bool here = at_destination(world.perceived_pose(), goal, config.tol);
                    if (here) {
                        close_outcome(true, false);
                        fire(NavEvent::AtDestination, "arrived at waypoint " +
                                                          std::to_string(outcome.index));
                    } else if (retries >= config.max_retries) {
                        close_outcome(false, false);
                        fire(NavEvent::AtDestination,
                             "conceding waypoint " + std::to_string(outcome.index) + " after " +
                                 std::to_string(retries) + " timeouts");
                    } else {
                        fire(NavEvent::NotAtDestination, "navigating to waypoint " +
                                                             std::to_string(outcome.index));
                    }
                    break;
                }
                case NavState::Move: {
                    std::optional<double> abort_at;
                    if (next_interrupt < interrupts.size())
                        abort_at = std::max(interrupts[next_interrupt], world.time());
                    const GotoResult result =
                        world.goto_pose(goal, config.tol, config.tol.timeout, abort_at);
                    if (result == GotoResult::Interrupted) {
                        ++next_interrupt;
                        fire(NavEvent::OperatorInterrupt,
                             "operator takeover en route to waypoint " +
                                 std::to_string(outcome.index));
                    } else if (result == GotoResult::Success) {
                        fire(NavEvent::NavSuccess, "navigation finished");
                    } else {
                        ++retries;
                        outcome.timeouts += 1;
                        if (world.last_goto_blocked()) outcome.goal_blocked = true;
                        fire(NavEvent::NavTimeout, "attempt " + std::to_string(retries) + " of " +
                                                       std::to_string(config.max_retries) +
                                                       " timed out");
                    }
                    break;
                }
                case NavState::ManualControl: {
                    world.idle(config.assist_delay);
                    world.teleport_to_perceived(goal);
                    outcome.assisted = true;
                    close_outcome(true, true);
                    fire(NavEvent::OperatorRelease, "operator placed robot at waypoint " +
                                                        std::to_string(outcome.index));
                    break;
                }
                case NavState::Scan: {
                    if (config.scan) {
                        auto captures = scan_at_waypoint(world, *config.scan, config.tol);
                        const bool ok =
                            captures.empty() || captures.back().ok;
                        log.captures.insert(log.captures.end(), captures.begin(),
                                            captures.end());
                        fire(NavEvent::ScanDone,
                             std::to_string(captures.size()) + " captures" +
                                 (ok ? "" : " (rotation failed, scan truncated)"));
                    } else {
                        fire(NavEvent::ScanDone, "scanning disabled");
                    }
                    break;
                }
                case NavState::Home: {
                    const Pose2D home = world.start_pose();
                    GotoResult result = GotoResult::Timeout;
                    for (int attempt = 0;
                         attempt < std::max(1, config.max_retries) &&
                         result != GotoResult::Success;
                         ++attempt)
                        result = world.goto_pose(home, config.tol, config.tol.timeout);
                    fire(NavEvent::HomeReached,
                         result == GotoResult::Success
                             ? "home; gesture stand_down"
                             : "home unreachable, stopping in place; gesture stand_down");
                    break;
                }
                case NavState::LoadMap:
                case NavState::Done:
                    break;
            }
        }
    } catch (const Error& e) {
        if (outcome_open) close_outcome(false, false);
        log.aborted = true;
        log.abort_reason = e.what();
    }
    log.total_time = world.time();
    return log;
}

namespace {

// Compress 1-based waypoint numbers: 6, 10, 37-39.
std::string number_list(const std::vector<std::size_t>& indices) {
    std::string out;
    std::size_t i = 0;
    while (i < indices.size()) {
        std::size_t j = i;
        while (j + 1 < indices.size() && indices[j + 1] == indices[j] + 1) ++j;
        if (!out.empty()) out += ", ";
        if (j - i >= 2)
            out += std::to_string(indices[i] + 1) + "-" + std::to_string(indices[j] + 1);
        else {
            out += std::to_string(indices[i] + 1);
            if (j > i) out += ", " + std::to_string(indices[j] + 1);
        }
        i = j + 1;
    }
    return out;
}

}  // namespace

MissionMetrics mission_metrics(const RunLog& log) {
    MissionMetrics m;
    m.total_waypoints = log.waypoints.size();
    m.total_time = log.total_time;

    std::vector<std::size_t> assisted, stalled, unreachable;
    for (const WaypointOutcome& w : log.waypoints) {
        m.waypoint_times.push_back(w.duration());
        if (w.reached) ++m.reached;
        if (w.assisted) assisted.push_back(w.index);
        if (w.reached && !w.assisted && w.timeouts > 0) stalled.push_back(w.index);
        if (!w.reached) unreachable.push_back(w.index);
    }
    m.reachability_pct = m.total_waypoints == 0
                             ? 100.0
                             : 100.0 * static_cast<double>(m.reached) /
                                   static_cast<double>(m.total_waypoints);

    if (!m.waypoint_times.empty()) {
        std::vector<double> sorted = m.waypoint_times;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        m.median_waypoint_time =
            n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        double total = 0.0;
        for (const double t : m.waypoint_times) total += t;
        m.mean_waypoint_time = total / static_cast<double>(n);
    }

    if (!assisted.empty())
        m.observations.push_back("Human assistance required at Waypoint" +
                                 std::string(assisted.size() > 1 ? "s " : " ") +
                                 number_list(assisted) + ".");
    if (!stalled.empty())
        m.observations.push_back("Robot stalled at Waypoint" +
                                 std::string(stalled.size() > 1 ? "s " : " ") +
                                 number_list(stalled) + " due to replanning.");
    if (!unreachable.empty()) {
        bool all_blocked = true;
        for (const WaypointOutcome& w : log.waypoints)
            if (!w.reached && !w.goal_blocked) all_blocked = false;
        m.observations.push_back(
            "Waypoint" + std::string(unreachable.size() > 1 ? "s " : " ") +
            number_list(unreachable) + (all_blocked
                                            ? " unreachable (displaced into the occupied space)."
                                            : " unreachable."));
    }
    if (log.aborted) m.observations.push_back("Mission aborted: " + log.abort_reason);
    if (m.observations.empty()) m.observations.push_back("None.");
    return m;
}

std::string format_report(const MissionMetrics& metrics) {
    std::string observations;
    for (const std::string& o : metrics.observations) {
        if (!observations.empty()) observations += " ";
        observations += o;
    }
    std::ostringstream out;
    const std::string header_1 = "Reachability (%)";
    const std::string header_2 = "Total Time (s)";
    const std::string header_3 = "Median Time per Waypoint (s)";
    const std::string header_4 = "Observations";
    auto pad = [](const std::string& s, std::size_t width) {
        std::string padded = s;
        while (padded.size() < width) padded += ' ';
        return padded;
    };
    out << pad(header_1, 18) << pad(header_2, 16) << pad(header_3, 30) << header_4 << "\n";
    out << pad(format_trimmed(metrics.reachability_pct, 2), 18)
        << pad(format_trimmed(metrics.total_time, 1), 16)
        << pad(format_trimmed(metrics.median_waypoint_time, 2), 30) << observations << "\n";
    return out.str();
}

void save_runlog(const RunLog& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write run log: " + path.string());
    char prefix[64];
    for (const LogEvent& e : log.events) {
        std::snprintf(prefix, sizeof(prefix), "%.3f", e.t);
        out << prefix << " " << to_string(e.state) << " " << e.event << " " << e.detail << "\n";
    }
    if (!out) throw IoError("failed writing run log: " + path.string());
}

}  // namespace covpath
