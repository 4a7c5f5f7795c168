#pragma once

#include <cstdint>

#include "trdp/cbs.hpp"

namespace trdp {

struct OracleOutcome {
    OutcomeKind kind = OutcomeKind::LimitExhausted;
    Tick cost = 0;
    std::int64_t expanded = 0;
};

/// Coupled A* over joint configurations. Unit-duration instances move all
/// agents in lockstep; otherwise the earliest idle agent picks its next action.
/// A configuration reached again at a later absolute time is a duplicate, so
/// the reduced space is finite and exhaustion proves unsolvability.
/// `node_limit` = 0 means unlimited.
OracleOutcome joint_astar(const Problem& problem, Objective objective, std::int64_t node_limit = 0);

}  // namespace trdp
