#include "trdp/motion.hpp"

#include <algorithm>
#include <tuple>

namespace trdp {

bool Constraint::blocks(const Action& action) const {
    if (const auto* vc = std::get_if<VertexConstraint>(&blocked)) {
        if (action.is_wait())
            return action.from.vertex == vc->vertex && action.from.time <= vc->time && vc->time <= action.to.time;
        return (action.from.vertex == vc->vertex && action.from.time == vc->time) ||
               (action.to.vertex == vc->vertex && action.to.time == vc->time);
    }
    const auto& ac = std::get<ActionConstraint>(blocked);
    if (action.edge != ac.edge) return false;
    if (action.is_wait() && action.from.vertex != ac.from) return false;
    return ac.depart_lo <= action.from.time && action.from.time < ac.depart_hi;
}

Tick Constraint::latest_time() const {
    if (const auto* vc = std::get_if<VertexConstraint>(&blocked)) return vc->time;
    return std::get<ActionConstraint>(blocked).depart_hi;
}

std::string Constraint::to_string() const {
    std::string out = "<" + std::to_string(agent) + ",";
    if (const auto* vc = std::get_if<VertexConstraint>(&blocked))
        return out + "v" + std::to_string(vc->vertex) + "," + std::to_string(vc->time) + ">";
    const auto& ac = std::get<ActionConstraint>(blocked);
    out += ac.edge == kWaitEdge ? "wait@" + std::to_string(ac.from) : "e" + std::to_string(ac.edge);
    return out + ",[" + std::to_string(ac.depart_lo) + "," + std::to_string(ac.depart_hi) + ")>";
}

bool actions_overlap(const Action& a, const Action& b) {
    return (a.from.time <= b.to.time && b.to.time <= a.to.time) || (b.from.time <= a.to.time && a.to.time <= b.to.time);
}

namespace {

struct Presence {
    VertexId vertex;
    Tick lo;
    Tick hi;
};

int presences(const Action& a, Presence out[2]) {
    if (a.is_wait()) {
        out[0] = {a.from.vertex, a.from.time, a.to.time};
        return 1;
    }
    out[0] = {a.from.vertex, a.from.time, a.from.time};
    out[1] = {a.to.vertex, a.to.time, a.to.time};
    return 2;
}

void widen(std::optional<Interval>& acc, Tick lo, Tick hi) {
    if (!acc) {
        acc = Interval{lo, hi};
        return;
    }
    acc->lo = std::min(acc->lo, lo);
    acc->hi = std::max(acc->hi, hi);
}

std::optional<Interval> collide_points(const Action& a, const Action& b, const Graph& graph) {
    std::optional<Interval> out;
    Presence pa[2], pb[2];
    int na = presences(a, pa);
    int nb = presences(b, pb);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            if (pa[i].vertex != pb[j].vertex) continue;
            Tick lo = std::max(pa[i].lo, pb[j].lo);
            Tick hi = std::min(pa[i].hi, pb[j].hi);
            if (lo <= hi) widen(out, lo, hi);
        }
    }
    if (!a.is_wait() && !b.is_wait() && graph.edge(a.edge).link == graph.edge(b.edge).link &&
        a.from.vertex == b.to.vertex && a.to.vertex == b.from.vertex) {
        Tick lo = std::max(a.from.time, b.from.time);
        Tick hi = std::min(a.to.time, b.to.time);
        if (lo < hi) widen(out, lo, hi);
    }
    return out;
}

struct Vec2 {
    Rational x;
    Rational y;
};

Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(const Vec2& a, const Rational& k) { return {a.x * k, a.y * k}; }
Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Position of the agent at tick t is origin + velocity * t.
struct Motion {
    Vec2 origin;
    Vec2 velocity;
};

Motion motion_of(const Action& a, const Graph& graph) {
    const Point& p = graph.coords(a.from.vertex);
    Vec2 from{p.x, p.y};
    if (a.from.vertex == a.to.vertex) return {from, {0, 0}};
    const Point& q = graph.coords(a.to.vertex);
    Vec2 velocity = (Vec2{q.x, q.y} - from) * Rational(1, a.to.time - a.from.time);
    return {from - velocity * Rational(a.from.time), velocity};
}

std::optional<Interval> collide_discs(const Action& a, const Action& b, const Rational& radius, const Graph& graph) {
    Tick lo = std::max(a.from.time, b.from.time);
    Tick hi = std::min(a.to.time, b.to.time);
    if (lo > hi) return std::nullopt;
    Motion ma = motion_of(a, graph);
    Motion mb = motion_of(b, graph);
    // Squared center distance q(t) = bb t^2 + 2 ab t + aa over [lo, hi].
    Vec2 rel_origin = ma.origin - mb.origin;
    Vec2 rel_velocity = ma.velocity - mb.velocity;
    Rational aa = dot(rel_origin, rel_origin);
    Rational ab = dot(rel_origin, rel_velocity);
    Rational bb = dot(rel_velocity, rel_velocity);
    Rational threshold = Rational(4) * radius * radius;
    auto q = [&](const Rational& t) { return bb * t * t + Rational(2) * ab * t + aa; };

    Rational vertex = Rational(lo);
    if (bb.sign() != 0) {
        vertex = -ab / bb;
        if (vertex < Rational(lo)) vertex = Rational(lo);
        if (vertex > Rational(hi)) vertex = Rational(hi);
    }
    if (!(q(vertex) < threshold)) return std::nullopt;

    // q is nonincreasing on [lo, vertex] and nondecreasing on [vertex, hi]; the
    // collision set is an open interval around `vertex`, widened to whole ticks.
    Tick left = lo;
    if (!(q(Rational(lo)) < threshold)) {
        Tick l = lo, r = vertex.floor();  // q(l) >= threshold, find the last such tick
        while (l < r) {
            Tick mid = l + (r - l + 1) / 2;
            if (q(Rational(mid)) < threshold)
                r = mid - 1;
            else
                l = mid;
        }
        left = l;
    }
    Tick right = hi;
    if (!(q(Rational(hi)) < threshold)) {
        Tick l = vertex.ceil(), r = hi;  // q(r) >= threshold, find the first such tick
        while (l < r) {
            Tick mid = l + (r - l) / 2;
            if (q(Rational(mid)) < threshold)
                l = mid + 1;
            else
                r = mid;
        }
        right = r;
    }
    return Interval{left, right};
}

}  // namespace

std::optional<Interval> collide(const Action& a, const Action& b, const Rational& radius, const Graph& graph) {
    if (!actions_overlap(a, b)) return std::nullopt;
    if (radius.sign() == 0) return collide_points(a, b, graph);
    return collide_discs(a, b, radius, graph);
}

std::vector<Action> path_actions(const Path& path, Tick until, Tick wait_ticks) {
    std::vector<Action> out;
    out.reserve(path.states.size() + 1);
    for (std::size_t i = 0; i + 1 < path.states.size(); ++i) out.push_back(Action{path.states[i], path.states[i + 1], path.edges[i]});
    State last = path.states.back();
    while (last.time < until) {
        State next{last.vertex, last.time + wait_ticks};
        out.push_back(Action{last, next, kWaitEdge});
        last = next;
    }
    if (out.empty()) out.push_back(Action{last, last, kWaitEdge});
    return out;
}

Tick solution_makespan(std::span<const Path> solution) {
    Tick makespan = 0;
    for (const Path& p : solution) makespan = std::max(makespan, p.arrival());
    return makespan;
}

namespace {

struct PairConflict {
    Interval interval;
    Action a;
    Action b;
};

// Earliest collision between two action sequences sorted by departure.
std::optional<PairConflict> first_pair_conflict(const std::vector<Action>& xs, const std::vector<Action>& ys, const Problem& problem) {
    std::optional<PairConflict> best;
    std::size_t j0 = 0;
    for (const Action& x : xs) {
        if (best && x.from.time > best->interval.lo) break;
        while (j0 < ys.size() && ys[j0].to.time < x.from.time) ++j0;
        for (std::size_t j = j0; j < ys.size() && ys[j].from.time <= x.to.time; ++j) {
            if (best && ys[j].from.time > best->interval.lo) break;
            auto hit = collide(x, ys[j], problem.radius(), problem.graph());
            if (hit && (!best || hit->lo < best->interval.lo)) best = PairConflict{*hit, x, ys[j]};
        }
    }
    return best;
}

std::vector<std::vector<Action>> all_actions(std::span<const Path> solution, const Problem& problem) {
    Tick makespan = solution_makespan(solution);
    std::vector<std::vector<Action>> out;
    out.reserve(solution.size());
    for (const Path& p : solution) out.push_back(path_actions(p, makespan, problem.wait_ticks()));
    return out;
}

}  // namespace

std::optional<MotionConflict> find_first_conflict(std::span<const Path> solution, const Problem& problem) {
    auto actions = all_actions(solution, problem);
    std::optional<MotionConflict> best;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        for (std::size_t j = i + 1; j < actions.size(); ++j) {
            auto hit = first_pair_conflict(actions[i], actions[j], problem);
            if (hit && (!best || hit->interval.lo < best->interval.lo))
                best = MotionConflict{static_cast<int>(i), static_cast<int>(j), hit->a, hit->b, hit->interval};
        }
    }
    return best;
}

int count_conflicting_pairs(std::span<const Path> solution, const Problem& problem) {
    auto actions = all_actions(solution, problem);
    int count = 0;
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t j = i + 1; j < actions.size(); ++j)
            if (first_pair_conflict(actions[i], actions[j], problem)) ++count;
    return count;
}

namespace {

bool has_state(const Action& a, const State& s) { return a.from == s || a.to == s; }

ActionConstraint block_action(const Action& a) { return ActionConstraint{a.from.vertex, a.edge, a.from.time, a.from.time + 1}; }

}  // namespace

std::pair<Constraint, Constraint> constraints_from_conflict(const MotionConflict& conflict, const Problem& problem) {
    if (conflict.agent_i == conflict.agent_j) throw UsageError("a conflict needs two distinct agents");
    auto hit = collide(conflict.action_i, conflict.action_j, problem.radius(), problem.graph());
    if (!hit) throw UsageError("constraints requested for actions that do not collide");
    if (problem.radius().sign() == 0) {
        // Shared state (v, t) at the first collision instant: classic vertex constraints.
        for (const State& s : {conflict.action_i.from, conflict.action_i.to}) {
            if (s.time == hit->lo && has_state(conflict.action_j, s)) {
                VertexConstraint vc{s.vertex, s.time};
                return {Constraint{conflict.agent_i, vc}, Constraint{conflict.agent_j, vc}};
            }
        }
    }
    return {Constraint{conflict.agent_i, block_action(conflict.action_i)}, Constraint{conflict.agent_j, block_action(conflict.action_j)}};
}

}  // namespace trdp
