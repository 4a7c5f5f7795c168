#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "trdp/problem.hpp"

namespace trdp {

struct State {
    VertexId vertex = 0;
    Tick time = 0;
    friend bool operator==(const State&, const State&) = default;
    friend auto operator<=>(const State&, const State&) = default;
};

/// Single-agent plan: states[0] = (start, 0), edges[i] leads from states[i]
/// to states[i + 1] (kWaitEdge for a wait in place).
struct Path {
    std::vector<State> states;
    std::vector<EdgeId> edges;

    /// Goal-arrival time; the agent stays at its last vertex afterwards.
    Tick arrival() const { return states.back().time; }
    VertexId last_vertex() const { return states.back().vertex; }
    friend bool operator==(const Path&, const Path&) = default;
};

using Solution = std::vector<Path>;

/// One traversal or wait. `edge` is kWaitEdge for waits.
struct Action {
    State from;
    State to;
    EdgeId edge = kWaitEdge;

    bool is_wait() const { return edge == kWaitEdge; }
    friend bool operator==(const Action&, const Action&) = default;
};

/// Closed tick interval.
struct Interval {
    Tick lo = 0;
    Tick hi = 0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct MotionConflict {
    int agent_i = 0;
    int agent_j = 0;
    Action action_i;
    Action action_j;
    Interval interval;
};

/// Agent may not be located at `vertex` at instant `time`.
struct VertexConstraint {
    VertexId vertex = 0;
    Tick time = 0;
    friend bool operator==(const VertexConstraint&, const VertexConstraint&) = default;
};

/// Agent may not start the given action (edge, or wait at `from` when edge is
/// kWaitEdge) at a departure time in [depart_lo, depart_hi).
struct ActionConstraint {
    VertexId from = 0;
    EdgeId edge = kWaitEdge;
    Tick depart_lo = 0;
    Tick depart_hi = 1;
    friend bool operator==(const ActionConstraint&, const ActionConstraint&) = default;
};

struct Constraint {
    int agent = 0;
    std::variant<VertexConstraint, ActionConstraint> blocked;

    /// True iff performing `action` violates this constraint.
    bool blocks(const Action& action) const;
    /// Last tick this constraint can influence; departures and visits after it are free.
    Tick latest_time() const;
    std::string to_string() const;
    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Closed-interval overlap test on the two actions' spans.
bool actions_overlap(const Action& a, const Action& b);

/// Collision of two agents' actions. Radius 0 uses classic point semantics
/// (shared vertex at the same instant, or opposite traversal of one undirected
/// edge); a positive radius tests constant-velocity discs along straight
/// segments. The returned window is widened outward to whole ticks.
std::optional<Interval> collide(const Action& a, const Action& b, const Rational& radius, const Graph& graph);

/// Actions of `path`, followed by waits at its goal until `until` is covered.
std::vector<Action> path_actions(const Path& path, Tick until, Tick wait_ticks);

Tick solution_makespan(std::span<const Path> solution);

/// Earliest-starting conflict over all agent pairs; ties go to the smaller pair.
std::optional<MotionConflict> find_first_conflict(std::span<const Path> solution, const Problem& problem);

/// Number of agent pairs whose paths collide at least once.
int count_conflicting_pairs(std::span<const Path> solution, const Problem& problem);

/// The two alternative single-agent constraints that resolve `conflict`.
std::pair<Constraint, Constraint> constraints_from_conflict(const MotionConflict& conflict, const Problem& problem);

}  // namespace trdp
