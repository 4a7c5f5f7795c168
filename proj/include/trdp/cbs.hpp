#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "trdp/low_level.hpp"
#include "trdp/trd.hpp"

namespace trdp {

enum class Objective { Flowtime, Makespan };

struct SolverConfig {
    Objective objective = Objective::Flowtime;
    bool trdp = true;
    bool bypass = true;
    std::int64_t ct_node_limit = 0;  // 0 = unlimited
    double time_limit = 0;           // seconds, 0 = unlimited
    /// Optional observers: cost of every expanded CT node, and node cost before/after each accepted bypass.
    std::function<void(Tick)> on_expand;
    std::function<void(Tick, Tick)> on_bypass;
};

struct SolveStats {
    std::int64_t ct_generated = 0;
    std::int64_t ct_expanded = 0;
    std::int64_t trd_conflicts = 0;
    std::int64_t motion_conflicts = 0;
    std::int64_t bypasses = 0;
    std::int64_t trd_splits = 0;
    std::int64_t low_level_expansions = 0;
    double trd_check_seconds = 0;
    double elapsed_seconds = 0;
};

enum class OutcomeKind { Solved, Unsolvable, LimitExhausted };

std::string to_string(OutcomeKind kind);
std::string to_string(Objective objective);

struct Outcome {
    OutcomeKind kind = OutcomeKind::LimitExhausted;
    Solution solution;
    Tick cost = 0;
    SolveStats stats;
    /// Why the run stopped when kind is LimitExhausted: "node_limit", "time_limit" or "open_exhausted".
    std::string limit;
};

Tick solution_cost(std::span<const Path> solution, Objective objective);

/// Conflict-based search. With trdp on, loops repeated by all agents are
/// split away (or bypassed) before motion conflicts are resolved, so an
/// exhausted tree proves the instance unsolvable.
Outcome solve(const Problem& problem, const SolverConfig& config);

/// Worst-case conflict-tree size. The generic bound is 2^exponent; `value` is
/// only materialized when the exponent is small enough to print.
struct CtBound {
    boost::multiprecision::cpp_int exponent;
    std::optional<boost::multiprecision::cpp_int> value;
    /// min((C r)^3, |V| C r)^k when a cost C was given.
    std::optional<boost::multiprecision::cpp_int> cost_bound;
};

CtBound ct_upper_bound(std::int64_t vertices, std::int64_t agents, std::int64_t resolution,
                       std::optional<Rational> cost = std::nullopt);
/// Uses the problem's vertex count, agent count and tick denominator as r; `cost` is in ticks.
CtBound ct_upper_bound(const Problem& problem, std::optional<Tick> cost = std::nullopt);

}  // namespace trdp
