#include "trdp/trd.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>

namespace trdp {

std::string TrdConstraint::to_string() const {
    return "<" + std::to_string(agent) + ",[" + std::to_string(window_start) + "," + std::to_string(window_end) + ")," +
           std::to_string(offset) + ">";
}

Tick t_min(const JointState& s) {
    if (s.states.empty()) throw UsageError("t_min of an empty joint state");
    Tick out = s.states.front().time;
    for (const State& m : s.states) out = std::min(out, m.time);
    return out;
}

Tick t_max(const JointState& s) {
    if (s.states.empty()) throw UsageError("t_max of an empty joint state");
    Tick out = s.states.front().time;
    for (const State& m : s.states) out = std::max(out, m.time);
    return out;
}

JointState delta_t(const JointState& s) {
    Tick base = t_min(s);
    JointState out = s;
    for (State& m : out.states) m.time -= base;
    return out;
}

bool is_trd(const JointState& s, const JointState& s_prime) {
    if (s.states.size() != s_prime.states.size()) throw UsageError("is_trd needs joint states of equal size");
    return delta_t(s) == delta_t(s_prime);
}

bool joint_state_valid(std::span<const Action> arrivals) {
    for (std::size_t i = 0; i < arrivals.size(); ++i)
        for (std::size_t j = i + 1; j < arrivals.size(); ++j)
            if (!actions_overlap(arrivals[i], arrivals[j])) return false;
    return true;
}

std::vector<State> extended_states(const Path& path, Tick makespan, Tick wait_ticks) {
    std::vector<State> out = path.states;
    State last = out.back();
    while (last.time + wait_ticks <= makespan) {
        last.time += wait_ticks;
        out.push_back(last);
    }
    return out;
}

std::vector<LoopOccurrence> find_single_agent_loops(const Path& path, Tick makespan, Tick wait_ticks, int agent) {
    auto states = extended_states(path, makespan, wait_ticks);
    std::vector<LoopOccurrence> out;
    for (std::size_t p = 0; p < states.size(); ++p)
        for (std::size_t q = p + 1; q < states.size(); ++q)
            if (states[p].vertex == states[q].vertex)
                out.push_back(LoopOccurrence{agent, states[p], states[q], states[q].time - states[p].time});
    return out;
}

namespace {

struct AgentTrace {
    std::vector<State> states;
    std::vector<Tick> arrival_start;  // departure time of the action that reached states[p]
    std::map<Tick, std::vector<int>> starts_by_offset;

    Action arrival(int p) const {
        State from = p == 0 ? states[0] : states[p - 1];
        return Action{State{from.vertex, arrival_start[p]}, states[p], kWaitEdge};
    }
};

AgentTrace trace(const Path& path, Tick makespan, Tick wait_ticks) {
    AgentTrace t;
    t.states = extended_states(path, makespan, wait_ticks);
    t.arrival_start.resize(t.states.size());
    for (std::size_t p = 0; p < t.states.size(); ++p) t.arrival_start[p] = p == 0 ? t.states[0].time : t.states[p - 1].time;
    std::unordered_map<VertexId, std::vector<int>> visits;
    for (std::size_t p = 0; p < t.states.size(); ++p) visits[t.states[p].vertex].push_back(static_cast<int>(p));
    for (const auto& [vertex, idx] : visits)
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                t.starts_by_offset[t.states[idx[b]].time - t.states[idx[a]].time].push_back(idx[a]);
    for (auto& [offset, starts] : t.starts_by_offset) std::sort(starts.begin(), starts.end());
    return t;
}

bool overlap(const AgentTrace& a, int p, const AgentTrace& b, int q) {
    Tick a0 = a.arrival_start[p], a1 = a.states[p].time;
    Tick b0 = b.arrival_start[q], b1 = b.states[q].time;
    return (a0 <= b1 && b1 <= a1) || (b0 <= a1 && a1 <= b1);
}

// Chooses one loop start per agent (earliest first) such that the arrival
// actions pairwise overlap and the earliest chosen time is exactly `anchor`.
bool choose(const std::vector<AgentTrace>& traces, const std::vector<const std::vector<int>*>& candidates, Tick anchor,
            std::size_t agent, std::vector<int>& chosen, bool anchored) {
    if (agent == traces.size()) return anchored;
    const AgentTrace& tr = traces[agent];
    for (int p : *candidates[agent]) {
        if (tr.states[p].time < anchor) continue;
        // A member of a valid joint state whose earliest time is `anchor` must
        // be moving (or waiting) across `anchor`.
        if (tr.arrival_start[p] > anchor) break;
        bool ok = true;
        for (std::size_t other = 0; other < agent && ok; ++other) ok = overlap(traces[other], chosen[other], tr, p);
        if (!ok) continue;
        chosen[agent] = p;
        if (choose(traces, candidates, anchor, agent + 1, chosen, anchored || tr.states[p].time == anchor)) return true;
    }
    return false;
}

}  // namespace

std::optional<TrdDetection> detect_trd(std::span<const Path> solution, Tick wait_ticks) {
    if (solution.empty()) throw UsageError("detect_trd needs at least one path");
    Tick makespan = solution_makespan(solution);
    std::vector<AgentTrace> traces;
    traces.reserve(solution.size());
    for (const Path& p : solution) {
        traces.push_back(trace(p, makespan, wait_ticks));
        if (traces.back().starts_by_offset.empty()) return std::nullopt;  // fewer than k looping paths
    }

    const AgentTrace* fewest = &traces.front();
    for (const AgentTrace& t : traces)
        if (t.starts_by_offset.size() < fewest->starts_by_offset.size()) fewest = &t;

    Tick best_anchor = std::numeric_limits<Tick>::max();
    Tick best_offset = 0;
    std::vector<int> best_chosen;
    std::vector<const std::vector<int>*> candidates(traces.size());
    std::vector<int> chosen(traces.size());
    for (const auto& [offset, unused] : fewest->starts_by_offset) {
        bool common = true;
        for (std::size_t i = 0; i < traces.size() && common; ++i) {
            auto it = traces[i].starts_by_offset.find(offset);
            if (it == traces[i].starts_by_offset.end())
                common = false;
            else
                candidates[i] = &it->second;
        }
        if (!common) continue;
        std::vector<Tick> anchors;
        for (std::size_t i = 0; i < traces.size(); ++i)
            for (int p : *candidates[i]) anchors.push_back(traces[i].states[p].time);
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
        for (Tick anchor : anchors) {
            if (anchor >= best_anchor) break;
            if (choose(traces, candidates, anchor, 0, chosen, false)) {
                best_anchor = anchor;
                best_offset = offset;
                best_chosen = chosen;
                break;
            }
        }
    }
    if (best_chosen.empty()) return std::nullopt;

    TrdDetection out;
    out.offset = best_offset;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        State s = traces[i].states[best_chosen[i]];
        out.loop_start.states.push_back(s);
        out.loop_end.states.push_back(State{s.vertex, s.time + best_offset});
    }
    // The loop starts span [t_min(S), t_max(S)]; on the tick lattice the
    // half-open window needs one extra tick to contain t_max(S).
    Tick start = t_min(out.loop_start);
    Tick end = t_max(out.loop_start) + 1;
    for (std::size_t i = 0; i < traces.size(); ++i)
        out.constraints.push_back(TrdConstraint{static_cast<int>(i), start, end, best_offset});
    return out;
}

std::optional<std::vector<TrdConstraint>> find_trds(std::span<const Path> solution, Tick wait_ticks) {
    auto found = detect_trd(solution, wait_ticks);
    if (!found) return std::nullopt;
    return std::move(found->constraints);
}

}  // namespace trdp
