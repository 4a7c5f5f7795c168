#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trdp/motion.hpp"

namespace trdp {

/// Loop-blocking constraint: for `agent`, any state whose time lies in
/// [window_start, window_end) is a loop-start candidate, and revisiting the
/// candidate's vertex exactly `offset` later is forbidden.
struct TrdConstraint {
    int agent = 0;
    Tick window_start = 0;
    Tick window_end = 1;
    Tick offset = 1;

    bool is_candidate(Tick t) const { return window_start <= t && t < window_end; }
    /// Last tick at which this constraint can forbid a state.
    Tick latest_time() const { return window_end - 1 + offset; }
    std::string to_string() const;
    friend bool operator==(const TrdConstraint&, const TrdConstraint&) = default;
};

/// One state per agent.
struct JointState {
    std::vector<State> states;
    friend bool operator==(const JointState&, const JointState&) = default;
};

Tick t_min(const JointState& s);
Tick t_max(const JointState& s);
/// Shifts every member time so the earliest becomes 0.
JointState delta_t(const JointState& s);
/// Vertices equal and relative times equal, member by member.
bool is_trd(const JointState& s, const JointState& s_prime);

/// True iff the member arrival actions pairwise overlap in time.
bool joint_state_valid(std::span<const Action> arrivals);

struct LoopOccurrence {
    int agent = 0;
    State start;
    State end;
    Tick offset = 0;
    friend bool operator==(const LoopOccurrence&, const LoopOccurrence&) = default;
};

/// The path's states followed by implicit goal waits up to `makespan`.
std::vector<State> extended_states(const Path& path, Tick makespan, Tick wait_ticks);

/// Every pair of visits to the same vertex, ordered by start then end time.
std::vector<LoopOccurrence> find_single_agent_loops(const Path& path, Tick makespan, Tick wait_ticks, int agent = 0);

struct TrdDetection {
    JointState loop_start;  // S
    JointState loop_end;    // S'
    Tick offset = 0;
    std::vector<TrdConstraint> constraints;
};

/// Canonical k-agent temporally-relative duplicate of the solution (smallest
/// t_min(S), then smallest offset), or nullopt when none exists.
std::optional<TrdDetection> detect_trd(std::span<const Path> solution, Tick wait_ticks);

/// The k TRD constraints of detect_trd, one per agent.
std::optional<std::vector<TrdConstraint>> find_trds(std::span<const Path> solution, Tick wait_ticks);

}  // namespace trdp
