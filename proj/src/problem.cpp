#include "trdp/problem.hpp"

#include <functional>
#include <queue>
#include <utility>

namespace trdp {

Problem::Problem(Instance instance) : instance_(std::move(instance)) {
    auto violations = validate_instance(instance_);
    if (!violations.empty()) {
        std::string msg = "invalid instance:";
        for (const auto& v : violations) msg += " " + v.to_string();
        throw UsageError(msg);
    }
    timing_ = compute_timing(instance_);
    goal_distance_.reserve(instance_.agent_count());
    for (VertexId g : instance_.goals) goal_distance_.push_back(reverse_dijkstra(instance_.graph, timing_, g));
}

std::vector<Tick> reverse_dijkstra(const Graph& graph, const Timing& timing, VertexId target) {
    std::vector<Tick> dist(graph.vertex_count(), kUnreachable);
    using Item = std::pair<Tick, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[target] = 0;
    queue.emplace(0, target);
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d != dist[v]) continue;
        for (EdgeId e : graph.in_edges(v)) {
            VertexId u = graph.edge(e).from;
            Tick nd = checked::add(d, timing.edge_ticks[e]);
            if (dist[u] == kUnreachable || nd < dist[u]) {
                dist[u] = nd;
                queue.emplace(nd, u);
            }
        }
    }
    return dist;
}

}  // namespace trdp
