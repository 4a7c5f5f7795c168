#include "trdp/cbs.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <queue>
#include <set>
#include <tuple>
#include <variant>

namespace trdp {

std::string to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Solved: return "solved";
        case OutcomeKind::Unsolvable: return "unsolvable";
        case OutcomeKind::LimitExhausted: return "limit_exhausted";
    }
    return "?";
}

std::string to_string(Objective objective) { return objective == Objective::Flowtime ? "flowtime" : "makespan"; }

Tick solution_cost(std::span<const Path> solution, Objective objective) {
    if (solution.empty()) throw UsageError("cost of an empty solution");
    Tick out = 0;
    for (const Path& p : solution) out = objective == Objective::Flowtime ? checked::add(out, p.arrival()) : std::max(out, p.arrival());
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

// Constraints accumulate along a CT branch as a shared parent chain.
struct ChainLink {
    std::shared_ptr<const ChainLink> parent;
    std::variant<Constraint, TrdConstraint> item;
};
using Chain = std::shared_ptr<const ChainLink>;

struct CtNode {
    Chain chain;
    std::vector<std::shared_ptr<const Path>> paths;
    Tick cost = 0;
    int conflicts = 0;
    std::int64_t id = 0;
};

struct AgentConstraints {
    std::vector<Constraint> motion;
    std::vector<TrdConstraint> trds;
};

AgentConstraints gather(const Chain& chain, int agent) {
    AgentConstraints out;
    for (const ChainLink* link = chain.get(); link; link = link->parent.get()) {
        if (const auto* c = std::get_if<Constraint>(&link->item)) {
            if (c->agent == agent) out.motion.push_back(*c);
        } else if (const auto& d = std::get<TrdConstraint>(link->item); d.agent == agent) {
            out.trds.push_back(d);
        }
    }
    return out;
}

Chain extend(const Chain& chain, std::variant<Constraint, TrdConstraint> item) {
    return std::make_shared<const ChainLink>(ChainLink{chain, std::move(item)});
}

Solution materialize(const CtNode& node) {
    Solution out;
    out.reserve(node.paths.size());
    for (const auto& p : node.paths) out.push_back(*p);
    return out;
}

Tick others_makespan(const std::vector<std::shared_ptr<const Path>>& paths, int agent) {
    Tick out = 0;
    for (std::size_t i = 0; i < paths.size(); ++i)
        if (static_cast<int>(i) != agent) out = std::max(out, paths[i]->arrival());
    return out;
}

bool starts_or_goals_touch(const Problem& problem) {
    if (problem.radius().sign() == 0) return false;
    Rational limit = Rational(4) * problem.radius() * problem.radius();
    auto close = [&](VertexId a, VertexId b) {
        const Point& p = problem.graph().coords(a);
        const Point& q = problem.graph().coords(b);
        Rational dx = p.x - q.x, dy = p.y - q.y;
        return dx * dx + dy * dy < limit;
    };
    for (std::size_t i = 0; i < problem.agent_count(); ++i)
        for (std::size_t j = i + 1; j < problem.agent_count(); ++j)
            if (close(problem.start(i), problem.start(j)) || close(problem.goal(i), problem.goal(j))) return true;
    return false;
}

std::vector<Tick> fingerprint(const std::vector<std::shared_ptr<const Path>>& paths) {
    std::vector<Tick> out;
    for (const auto& p : paths) {
        out.push_back(static_cast<Tick>(p->states.size()));
        for (const State& s : p->states) {
            out.push_back(s.vertex);
            out.push_back(s.time);
        }
    }
    return out;
}

class Search {
public:
    Search(const Problem& problem, const SolverConfig& config) : problem_(problem), config_(config), started_(Clock::now()) {}

    Outcome run() {
        Outcome out = run_inner();
        out.stats = stats_;
        out.stats.elapsed_seconds = seconds_since(started_);
        return out;
    }

private:
    struct Order {
        bool operator()(const std::shared_ptr<CtNode>& a, const std::shared_ptr<CtNode>& b) const {
            return std::tie(a->cost, a->conflicts, a->id) > std::tie(b->cost, b->conflicts, b->id);
        }
    };

    static double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

    Outcome run_inner() {
        Outcome out;
        if (starts_or_goals_touch(problem_)) {
            out.kind = OutcomeKind::Unsolvable;
            return out;
        }
        auto root = std::make_shared<CtNode>();
        for (std::size_t i = 0; i < problem_.agent_count(); ++i) {
            auto path = replan(static_cast<int>(i), {}, 0);
            if (!path) {
                out.kind = OutcomeKind::Unsolvable;  // unreachable goal
                return out;
            }
            root->paths.push_back(std::move(path));
        }
        finish(*root);
        push(root);

        while (!open_.empty()) {
            if (config_.ct_node_limit > 0 && stats_.ct_generated >= config_.ct_node_limit) {
                out.limit = "node_limit";
                return out;
            }
            if (config_.time_limit > 0 && seconds_since(started_) >= config_.time_limit) {
                out.limit = "time_limit";
                return out;
            }
            std::shared_ptr<CtNode> node = open_.top();
            open_.pop();
            ++stats_.ct_expanded;
            if (config_.on_expand) config_.on_expand(node->cost);

            if (config_.trdp) {
                auto t0 = Clock::now();
                Solution current = materialize(*node);
                auto trds = find_trds(current, problem_.wait_ticks());
                stats_.trd_check_seconds += seconds_since(t0);
                if (trds) {
                    ++stats_.trd_conflicts;
                    handle_trd(node, *trds);
                    continue;
                }
            }

            Solution current = materialize(*node);
            auto conflict = find_first_conflict(current, problem_);
            if (!conflict) {
                out.kind = OutcomeKind::Solved;
                out.cost = node->cost;
                out.solution = std::move(current);
                return out;
            }
            ++stats_.motion_conflicts;
            auto [ci, cj] = constraints_from_conflict(*conflict, problem_);
            for (const Constraint& c : {ci, cj}) {
                Chain chain = extend(node->chain, c);
                auto path = replan(c.agent, chain, others_makespan(node->paths, c.agent));
                if (path) push(child(*node, chain, c.agent, std::move(path)));
            }
        }
        if (config_.trdp) {
            out.kind = OutcomeKind::Unsolvable;
        } else {
            out.limit = "open_exhausted";
        }
        return out;
    }

    void handle_trd(const std::shared_ptr<CtNode>& node, const std::vector<TrdConstraint>& trds) {
        std::vector<std::shared_ptr<const Path>> replans;
        std::vector<Chain> chains;
        for (const TrdConstraint& d : trds) {
            chains.push_back(extend(node->chain, d));
            replans.push_back(replan(d.agent, chains.back(), others_makespan(node->paths, d.agent)));
        }
        if (config_.bypass) {
            for (std::size_t i = 0; i < trds.size(); ++i) {
                const auto& path = replans[i];
                int agent = trds[i].agent;
                if (!path || path->arrival() != node->paths[agent]->arrival()) continue;
                auto candidate = child(*node, node->chain, agent, path);
                if (candidate->conflicts > node->conflicts) continue;
                if (!bypass_seen_.insert({node->chain, fingerprint(candidate->paths)}).second) continue;
                ++stats_.bypasses;
                if (config_.on_bypass) config_.on_bypass(node->cost, candidate->cost);
                candidate->id = node->id;  // same CT node, new solution
                open_.push(candidate);
                return;
            }
        }
        ++stats_.trd_splits;
        for (std::size_t i = 0; i < trds.size(); ++i)
            if (replans[i]) push(child(*node, chains[i], trds[i].agent, replans[i]));
    }

    std::shared_ptr<const Path> replan(int agent, const Chain& chain, Tick makespan_of_others) {
        AgentConstraints cs = gather(chain, agent);
        PlanResult r = plan_path(agent, problem_, cs.motion, cs.trds, PlanOptions{makespan_of_others, std::nullopt});
        stats_.low_level_expansions += r.expansions;
        if (!r.path) return nullptr;
        return std::make_shared<const Path>(std::move(*r.path));
    }

    std::shared_ptr<CtNode> child(const CtNode& parent, Chain chain, int agent, std::shared_ptr<const Path> path) {
        auto node = std::make_shared<CtNode>();
        node->chain = std::move(chain);
        node->paths = parent.paths;
        node->paths[agent] = std::move(path);
        finish(*node);
        return node;
    }

    void finish(CtNode& node) {
        Solution s = materialize(node);
        node.cost = solution_cost(s, config_.objective);
        node.conflicts = count_conflicting_pairs(s, problem_);
        node.id = next_id_++;
    }

    void push(std::shared_ptr<CtNode> node) {
        ++stats_.ct_generated;
        open_.push(std::move(node));
    }

    const Problem& problem_;
    SolverConfig config_;
    Clock::time_point started_;
    SolveStats stats_;
    std::priority_queue<std::shared_ptr<CtNode>, std::vector<std::shared_ptr<CtNode>>, Order> open_;
    // Solutions already reached by bypassing, per constraint set; guards against
    // bypass cycles. Holding the chain keeps its address from being reused.
    std::set<std::pair<Chain, std::vector<Tick>>> bypass_seen_;
    std::int64_t next_id_ = 0;
};

}  // namespace

Outcome solve(const Problem& problem, const SolverConfig& config) { return Search(problem, config).run(); }

CtBound ct_upper_bound(std::int64_t vertices, std::int64_t agents, std::int64_t resolution, std::optional<Rational> cost) {
    using boost::multiprecision::cpp_int;
    if (vertices < 1 || agents < 1 || resolution < 1) throw UsageError("ct_upper_bound needs positive sizes");
    CtBound out;
    cpp_int vr = cpp_int(vertices) * resolution;
    out.exponent = cpp_int(agents) * vr * vr * vr * vr;
    if (out.exponent <= 4096) out.value = cpp_int(1) << static_cast<unsigned>(out.exponent);
    if (cost) {
        Rational scaled = *cost * Rational(resolution);
        cpp_int cr = scaled.ceil();
        cpp_int per_agent = std::min<cpp_int>(cr * cr * cr, cpp_int(vertices) * cr);
        cpp_int total = 1;
        for (std::int64_t i = 0; i < agents; ++i) total *= per_agent;
        out.cost_bound = total;
    }
    return out;
}

CtBound ct_upper_bound(const Problem& problem, std::optional<Tick> cost) {
    const Time& tick = problem.timing().tick;
    std::int64_t r = tick.den();
    std::optional<Rational> c;
    if (cost) c = Rational(tick.num()) * Rational(*cost, r);
    return ct_upper_bound(static_cast<std::int64_t>(problem.graph().vertex_count()), static_cast<std::int64_t>(problem.agent_count()), r, c);
}

}  // namespace trdp
