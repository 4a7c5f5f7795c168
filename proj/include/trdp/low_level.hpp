#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "trdp/motion.hpp"
#include "trdp/trd.hpp"

namespace trdp {

/// A loop-start candidate that may not be revisited exactly `offset` later.
struct TrdPair {
    State loop_start;
    Tick offset = 1;

    Tick forbidden_time() const { return loop_start.time + offset; }
    friend bool operator==(const TrdPair&, const TrdPair&) = default;
    friend auto operator<=>(const TrdPair&, const TrdPair&) = default;
};

/// Sorted, duplicate-free list of live pairs.
using TrdList = std::vector<TrdPair>;

struct SearchNode {
    State state;
    Tick gcost = 0;
    std::int64_t parent = -1;
    EdgeId via = kWaitEdge;
    TrdList trd_list;
};

/// Motion constraints of one agent, indexed by vertex.
class ConstraintIndex {
public:
    ConstraintIndex() = default;
    explicit ConstraintIndex(std::span<const Constraint> constraints);

    bool blocks(const Action& action) const;
    /// True iff the agent may stay at `v` forever from time `t` on with waits of `wait_ticks`.
    bool allows_stay(VertexId v, Tick t, Tick wait_ticks) const;
    /// True iff the state itself is forbidden.
    bool blocks_state(const State& s) const;
    Tick latest_time() const { return latest_; }

private:
    std::unordered_map<VertexId, std::vector<Constraint>> by_vertex_;
    Tick latest_ = 0;
};

/// True iff reaching `s` completes a loop forbidden by one of the pairs.
bool trd_list_blocks(const TrdList& list, const State& s);

/// The list carried into `s`: pairs that can no longer fire are dropped and
/// `s` becomes a loop-start candidate of every TRD constraint whose window holds s.time.
TrdList advance_trd_list(const TrdList& list, const State& s, std::span<const TrdConstraint> trds);

/// Successors of `node` (graph moves, then the wait) that violate neither the
/// motion constraints nor the node's TRD list.
std::vector<SearchNode> expand(const SearchNode& node, std::int64_t node_index, const ConstraintIndex& constraints,
                               std::span<const TrdConstraint> trds, const Problem& problem);

/// Candidate nodes per (vertex, time) key with TRD-list dominance: an entry
/// dominates another when its gcost is no higher and its list is a subset.
class DominanceTable {
public:
    enum class Result { Inserted, Replaced, Dropped };

    /// Drops `candidate` when some stored entry dominates it; otherwise stores
    /// it and marks every entry it dominates as stale (Replaced when any did).
    Result update(const SearchNode& candidate, std::int64_t index);
    bool is_stale(std::int64_t index) const;

private:
    struct Entry {
        Tick gcost;
        TrdList list;
        std::int64_t index;
    };
    struct KeyHash {
        std::size_t operator()(const State& s) const {
            return std::hash<std::int64_t>()(s.time * 1000003 + s.vertex);
        }
    };
    std::unordered_map<State, std::vector<Entry>, KeyHash> by_key_;
    std::vector<bool> stale_;
};

struct PlanOptions {
    /// Latest goal arrival among the other agents; implicit goal waits up to it are checked against the TRD list.
    Tick others_makespan = 0;
    /// Overrides the default time horizon.
    std::optional<Tick> horizon;
};

struct PlanResult {
    std::optional<Path> path;
    std::int64_t expansions = 0;
};

/// Default horizon: latest constraint time + |V| * longest edge + one wait.
Tick default_horizon(const Problem& problem, const ConstraintIndex& constraints, std::span<const TrdConstraint> trds);

/// Minimum-arrival path for `agent` under motion constraints and TRD constraints.
PlanResult plan_path(int agent, const Problem& problem, std::span<const Constraint> constraints,
                     std::span<const TrdConstraint> trds, const PlanOptions& options = {});

}  // namespace trdp
