#include "trdp/oracle.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace trdp {
namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<Tick>& key) const {
        std::size_t h = key.size();
        for (Tick x : key) h ^= std::hash<Tick>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Agent i either performs `action` (possibly zero-length at the start) or has
// finished and stays at its goal forever.
struct Slot {
    Action action;
    bool finished = false;
    Tick finish_time = 0;
};

struct Node {
    std::vector<Slot> slots;
    Tick now = 0;
    Tick g = 0;
};

class Oracle {
public:
    Oracle(const Problem& problem, Objective objective, std::int64_t node_limit)
        : p_(problem), objective_(objective), node_limit_(node_limit) {
        lockstep_ = problem.wait_ticks() == 1 &&
                    std::all_of(problem.timing().edge_ticks.begin(), problem.timing().edge_ticks.end(), [](Tick t) { return t == 1; });
    }

    OracleOutcome run() {
        OracleOutcome out;
        const int k = static_cast<int>(p_.agent_count());
        Node root;
        for (int i = 0; i < k; ++i) {
            State s{p_.start(i), 0};
            root.slots.push_back(Slot{Action{s, s, kWaitEdge}});
            if (p_.goal_distance(i, s.vertex) == kUnreachable) {
                out.kind = OutcomeKind::Unsolvable;
                return out;
            }
        }
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (hit(root.slots[i].action, root.slots[j].action)) {
                    out.kind = OutcomeKind::Unsolvable;
                    return out;
                }
        push(std::move(root));

        while (!open_.empty()) {
            auto [f, neg_g, idx] = open_.top();
            open_.pop();
            Node node = nodes_[idx];
            if (best_[key(node)] < node.g) continue;
            if (std::all_of(node.slots.begin(), node.slots.end(), [](const Slot& s) { return s.finished; })) {
                out.kind = OutcomeKind::Solved;
                out.cost = node.g;
                return out;
            }
            if (node_limit_ > 0 && out.expanded >= node_limit_) return out;
            ++out.expanded;
            if (lockstep_)
                expand_lockstep(node);
            else
                expand_event(node);
        }
        out.kind = OutcomeKind::Unsolvable;
        return out;
    }

private:
    bool hit(const Action& a, const Action& b) const { return collide(a, b, p_.radius(), p_.graph()).has_value(); }

    Action parked(int agent, Tick from, Tick to) const {
        VertexId g = p_.goal(agent);
        return Action{State{g, from}, State{g, to}, kWaitEdge};
    }

    std::vector<Tick> key(const Node& n) const {
        std::vector<Tick> out;
        for (const Slot& s : n.slots) {
            out.push_back(s.finished);
            out.push_back(s.action.to.vertex);
            if (!lockstep_ && !s.finished) {
                out.push_back(s.action.from.vertex);
                out.push_back(s.action.edge);
                out.push_back(s.action.from.time - n.now);
                out.push_back(s.action.to.time - n.now);
            }
        }
        return out;
    }

    Tick heuristic(const Node& n) const {
        Tick out = 0;
        for (std::size_t i = 0; i < n.slots.size(); ++i) {
            const Slot& s = n.slots[i];
            if (s.finished) continue;
            Tick rest = s.action.to.time - n.now + p_.goal_distance(static_cast<int>(i), s.action.to.vertex);
            out = objective_ == Objective::Flowtime ? out + rest : std::max(out, rest);
        }
        return out;
    }

    Tick cost(const Node& n) const {
        Tick out = 0;
        for (const Slot& s : n.slots) {
            Tick t = s.finished ? s.finish_time : n.now;
            out = objective_ == Objective::Flowtime ? out + t : std::max(out, t);
        }
        return out;
    }

    void push(Node n) {
        n.g = cost(n);
        for (std::size_t i = 0; i < n.slots.size(); ++i)
            if (!n.slots[i].finished && p_.goal_distance(static_cast<int>(i), n.slots[i].action.to.vertex) == kUnreachable) return;
        auto k = key(n);
        auto it = best_.find(k);
        if (it != best_.end() && it->second <= n.g) return;
        best_[k] = n.g;
        Tick f = n.g + heuristic(n);
        open_.emplace(f, -n.g, static_cast<std::int64_t>(nodes_.size()));
        nodes_.push_back(std::move(n));
    }

    // Every idle agent may either stop for good (only at its goal) or act.
    std::vector<Action> options(VertexId v, Tick now) const {
        std::vector<Action> out;
        for (EdgeId e : p_.graph().out_edges(v))
            out.push_back(Action{State{v, now}, State{p_.graph().edge(e).to, now + p_.edge_ticks(e)}, e});
        out.push_back(Action{State{v, now}, State{v, now + p_.wait_ticks()}, kWaitEdge});
        return out;
    }

    void expand_lockstep(const Node& node) {
        const int k = static_cast<int>(node.slots.size());
        for (int i = 0; i < k; ++i) {
            const Slot& s = node.slots[i];
            if (!s.finished && s.action.to.vertex == p_.goal(i)) {
                Node next = node;
                next.slots[i].finished = true;
                next.slots[i].finish_time = node.now;
                push(std::move(next));
            }
        }
        std::vector<Action> chosen(k);
        Node next = node;
        next.now = node.now + 1;
        auto rec = [&](auto&& self, int i) -> void {
            if (i == k) {
                for (int a = 0; a < k; ++a)
                    if (!next.slots[a].finished) next.slots[a].action = chosen[a];
                push(next);
                return;
            }
            const Slot& s = node.slots[i];
            std::vector<Action> mine = s.finished ? std::vector<Action>{parked(i, node.now, node.now + 1)} : options(s.action.to.vertex, node.now);
            for (const Action& a : mine) {
                bool ok = true;
                for (int j = 0; j < i && ok; ++j) ok = !hit(a, chosen[j]);
                if (!ok) continue;
                chosen[i] = a;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }

    void expand_event(const Node& node) {
        const int k = static_cast<int>(node.slots.size());
        int ready = -1;
        for (int i = 0; i < k && ready < 0; ++i)
            if (!node.slots[i].finished && node.slots[i].action.to.time == node.now) ready = i;
        const VertexId here = node.slots[ready].action.to.vertex;

        auto clear_of_others = [&](const Action& a) {
            for (int j = 0; j < k; ++j) {
                if (j == ready) continue;
                const Slot& o = node.slots[j];
                const Action other = o.finished ? parked(j, a.from.time, a.to.time) : o.action;
                if (hit(a, other)) return false;
            }
            return true;
        };
        auto settle = [&](Node next) {
            Tick now = -1;
            for (const Slot& s : next.slots)
                if (!s.finished) now = now < 0 ? s.action.to.time : std::min(now, s.action.to.time);
            next.now = now < 0 ? node.now : now;
            push(std::move(next));
        };

        if (here == p_.goal(ready)) {
            Tick until = node.now;
            for (const Slot& s : node.slots)
                if (!s.finished) until = std::max(until, s.action.to.time);
            if (clear_of_others(parked(ready, node.now, until))) {
                Node next = node;
                next.slots[ready].finished = true;
                next.slots[ready].finish_time = node.now;
                settle(std::move(next));
            }
        }
        for (const Action& a : options(here, node.now)) {
            if (!clear_of_others(a)) continue;
            Node next = node;
            next.slots[ready].action = a;
            settle(std::move(next));
        }
    }

    const Problem& p_;
    Objective objective_;
    std::int64_t node_limit_;
    bool lockstep_ = false;
    std::vector<Node> nodes_;
    std::unordered_map<std::vector<Tick>, Tick, KeyHash> best_;
    using Item = std::tuple<Tick, Tick, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open_;
};

}  // namespace

OracleOutcome joint_astar(const Problem& problem, Objective objective, std::int64_t node_limit) {
    return Oracle(problem, objective, node_limit).run();
}

}  // namespace trdp
