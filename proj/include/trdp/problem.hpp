#pragma once

#include <vector>

#include "trdp/graph.hpp"

namespace trdp {

inline constexpr Tick kUnreachable = -1;

/// A validated instance together with its tick timing and per-agent
/// goal-distance tables. Immutable after construction.
class Problem {
public:
    /// Throws UsageError listing every violation when the instance is invalid.
    explicit Problem(Instance instance);

    const Instance& instance() const { return instance_; }
    const Graph& graph() const { return instance_.graph; }
    const Timing& timing() const { return timing_; }
    std::size_t agent_count() const { return instance_.agent_count(); }
    VertexId start(int agent) const { return instance_.starts.at(agent); }
    VertexId goal(int agent) const { return instance_.goals.at(agent); }
    const Rational& radius() const { return instance_.radius; }
    Tick wait_ticks() const { return timing_.wait_ticks; }
    Tick edge_ticks(EdgeId e) const { return timing_.edge_ticks[e]; }

    /// Exact shortest travel time (ticks) from `v` to the agent's goal, or kUnreachable.
    Tick goal_distance(int agent, VertexId v) const { return goal_distance_[agent][v]; }

private:
    Instance instance_;
    Timing timing_;
    std::vector<std::vector<Tick>> goal_distance_;
};

/// Single-target Dijkstra over reversed edges, in ticks.
std::vector<Tick> reverse_dijkstra(const Graph& graph, const Timing& timing, VertexId target);

}  // namespace trdp
