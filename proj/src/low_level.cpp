#include "trdp/low_level.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace trdp {

ConstraintIndex::ConstraintIndex(std::span<const Constraint> constraints) {
    for (const Constraint& c : constraints) {
        VertexId v = std::holds_alternative<VertexConstraint>(c.blocked) ? std::get<VertexConstraint>(c.blocked).vertex
                                                                         : std::get<ActionConstraint>(c.blocked).from;
        by_vertex_[v].push_back(c);
        latest_ = std::max(latest_, c.latest_time());
    }
}

bool ConstraintIndex::blocks(const Action& action) const {
    auto hit = [&](VertexId v) {
        auto it = by_vertex_.find(v);
        if (it == by_vertex_.end()) return false;
        return std::any_of(it->second.begin(), it->second.end(), [&](const Constraint& c) { return c.blocks(action); });
    };
    return hit(action.from.vertex) || (action.to.vertex != action.from.vertex && hit(action.to.vertex));
}

bool ConstraintIndex::blocks_state(const State& s) const {
    auto it = by_vertex_.find(s.vertex);
    if (it == by_vertex_.end()) return false;
    for (const Constraint& c : it->second)
        if (const auto* vc = std::get_if<VertexConstraint>(&c.blocked); vc && vc->time == s.time) return true;
    return false;
}

bool ConstraintIndex::allows_stay(VertexId v, Tick t, Tick wait_ticks) const {
    auto it = by_vertex_.find(v);
    if (it == by_vertex_.end()) return true;
    for (const Constraint& c : it->second) {
        if (const auto* vc = std::get_if<VertexConstraint>(&c.blocked)) {
            if (vc->time > t) return false;
            continue;
        }
        const auto& ac = std::get<ActionConstraint>(c.blocked);
        if (ac.edge != kWaitEdge || ac.depart_hi <= t) continue;
        // First wait departure t + n * wait_ticks (n >= 0) at or after depart_lo.
        Tick n = ac.depart_lo <= t ? 0 : (ac.depart_lo - t + wait_ticks - 1) / wait_ticks;
        if (t + n * wait_ticks < ac.depart_hi) return false;
    }
    return true;
}

bool trd_list_blocks(const TrdList& list, const State& s) {
    return std::any_of(list.begin(), list.end(),
                       [&](const TrdPair& p) { return p.loop_start.vertex == s.vertex && p.forbidden_time() == s.time; });
}

TrdList advance_trd_list(const TrdList& list, const State& s, std::span<const TrdConstraint> trds) {
    TrdList out;
    out.reserve(list.size() + trds.size());
    for (const TrdPair& p : list)
        if (p.forbidden_time() > s.time) out.push_back(p);
    bool added = false;
    for (const TrdConstraint& d : trds) {
        if (!d.is_candidate(s.time)) continue;
        out.push_back(TrdPair{s, d.offset});
        added = true;
    }
    if (added) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return out;
}

std::vector<SearchNode> expand(const SearchNode& node, std::int64_t node_index, const ConstraintIndex& constraints,
                               std::span<const TrdConstraint> trds, const Problem& problem) {
    std::vector<SearchNode> out;
    const Graph& graph = problem.graph();
    auto consider = [&](EdgeId edge, VertexId to, Tick duration) {
        State next{to, node.state.time + duration};
        if (constraints.blocks(Action{node.state, next, edge})) return;
        if (trd_list_blocks(node.trd_list, next)) return;
        out.push_back(SearchNode{next, node.gcost + duration, node_index, edge, advance_trd_list(node.trd_list, next, trds)});
    };
    for (EdgeId e : graph.out_edges(node.state.vertex)) consider(e, graph.edge(e).to, problem.edge_ticks(e));
    consider(kWaitEdge, node.state.vertex, problem.wait_ticks());
    return out;
}

DominanceTable::Result DominanceTable::update(const SearchNode& candidate, std::int64_t index) {
    auto& entries = by_key_[candidate.state];
    auto subset = [](const TrdList& a, const TrdList& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); };
    for (const Entry& e : entries)
        if (!is_stale(e.index) && e.gcost <= candidate.gcost && subset(e.list, candidate.trd_list)) return Result::Dropped;
    if (stale_.size() <= static_cast<std::size_t>(index)) stale_.resize(index + 1, false);
    bool replaced = false;
    std::erase_if(entries, [&](const Entry& e) {
        if (candidate.gcost <= e.gcost && subset(candidate.trd_list, e.list)) {
            stale_[e.index] = true;
            replaced = true;
            return true;
        }
        return false;
    });
    entries.push_back(Entry{candidate.gcost, candidate.trd_list, index});
    return replaced ? Result::Replaced : Result::Inserted;
}

bool DominanceTable::is_stale(std::int64_t index) const {
    return static_cast<std::size_t>(index) < stale_.size() && stale_[index];
}

Tick default_horizon(const Problem& problem, const ConstraintIndex& constraints, std::span<const TrdConstraint> trds) {
    Tick latest = constraints.latest_time();
    for (const TrdConstraint& d : trds) latest = std::max(latest, d.latest_time());
    Tick span = checked::mul(static_cast<Tick>(problem.graph().vertex_count()), problem.timing().max_edge_ticks);
    return checked::add(checked::add(latest, span), problem.wait_ticks());
}

namespace {

// Implicit goal waits up to `until` must not complete a forbidden loop.
bool goal_stay_loop_free(const SearchNode& node, std::span<const TrdConstraint> trds, Tick wait_ticks, Tick until) {
    Tick last_window = 0;
    for (const TrdConstraint& d : trds) last_window = std::max(last_window, d.window_end);
    TrdList list = node.trd_list;
    for (State s{node.state.vertex, node.state.time + wait_ticks}; s.time <= until; s.time += wait_ticks) {
        if (list.empty() && s.time >= last_window) break;
        if (trd_list_blocks(list, s)) return false;
        list = advance_trd_list(list, s, trds);
    }
    return true;
}

Path extract(const std::vector<SearchNode>& nodes, std::int64_t index) {
    Path path;
    for (std::int64_t i = index; i >= 0; i = nodes[i].parent) {
        path.states.push_back(nodes[i].state);
        if (nodes[i].parent >= 0) path.edges.push_back(nodes[i].via);
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.edges.begin(), path.edges.end());
    return path;
}

}  // namespace

PlanResult plan_path(int agent, const Problem& problem, std::span<const Constraint> constraints,
                     std::span<const TrdConstraint> trds, const PlanOptions& options) {
    PlanResult result;
    ConstraintIndex index(constraints);
    const Tick horizon = options.horizon.value_or(default_horizon(problem, index, trds));
    const VertexId start = problem.start(agent);
    const VertexId goal = problem.goal(agent);
    const Tick wait = problem.wait_ticks();
    if (problem.goal_distance(agent, start) == kUnreachable) return result;
    State root{start, 0};
    if (index.blocks_state(root)) return result;

    std::vector<SearchNode> nodes;
    DominanceTable table;
    // (f, -g, vertex, sequence)
    using Item = std::tuple<Tick, Tick, VertexId, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    auto push = [&](SearchNode node) {
        Tick h = problem.goal_distance(agent, node.state.vertex);
        if (h == kUnreachable || node.state.time > horizon) return;
        auto idx = static_cast<std::int64_t>(nodes.size());
        if (table.update(node, idx) == DominanceTable::Result::Dropped) return;
        open.emplace(node.gcost + h, -node.gcost, node.state.vertex, idx);
        nodes.push_back(std::move(node));
    };
    push(SearchNode{root, 0, -1, kWaitEdge, advance_trd_list({}, root, trds)});

    while (!open.empty()) {
        auto [f, neg_g, vertex, idx] = open.top();
        open.pop();
        if (table.is_stale(idx)) continue;
        const SearchNode node = nodes[idx];
        if (node.state.vertex == goal && index.allows_stay(goal, node.state.time, wait) &&
            goal_stay_loop_free(node, trds, wait, options.others_makespan)) {
            result.path = extract(nodes, idx);
            return result;
        }
        ++result.expansions;
        for (SearchNode& child : expand(node, idx, index, trds, problem)) push(std::move(child));
    }
    return result;
}

}  // namespace trdp
