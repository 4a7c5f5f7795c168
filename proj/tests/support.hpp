#pragma once

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "trdp/cli.hpp"

namespace trdp::test {

inline std::string fixture(const std::string& name) { return std::string(TRDP_FIXTURES) + "/" + name; }

inline std::string read(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string map_text(const std::vector<std::string>& rows) {
    std::string out = "type octile\nheight " + std::to_string(rows.size()) + "\nwidth " + std::to_string(rows.at(0).size()) + "\nmap\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

/// Grid instance from map rows and (x, y) start/goal cells, y counted from the top row.
inline Instance grid_instance(const std::vector<std::string>& rows, const std::vector<std::pair<int, int>>& starts,
                              const std::vector<std::pair<int, int>>& goals, int neighborhood = 4, Rational radius = 0) {
    GridGraph gg = grid_to_graph(load_movingai_map(map_text(rows)), neighborhood, 100);
    Instance inst;
    for (auto [x, y] : starts) inst.starts.push_back(gg.vertex_at(x, y).value());
    for (auto [x, y] : goals) inst.goals.push_back(gg.vertex_at(x, y).value());
    inst.graph = std::move(gg.graph);
    inst.radius = radius;
    inst.neighborhood = neighborhood;
    return inst;
}

inline Instance graph_fixture(const std::string& name) { return load_graph_file(read(fixture(name))); }

inline Instance map_fixture(const std::string& map, const std::string& scen, Rational radius = 0) {
    InputSpec spec;
    spec.map = fixture(map);
    spec.scen = fixture(scen);
    spec.radius = radius;
    return load_instance(spec);
}

/// Random instance on `rows` with `agents` distinct starts and distinct goals.
inline Instance random_instance(const std::vector<std::string>& rows, int agents, std::mt19937_64& rng, int neighborhood = 4,
                                Rational radius = 0) {
    std::vector<std::pair<int, int>> cells;
    for (int y = 0; y < static_cast<int>(rows.size()); ++y)
        for (int x = 0; x < static_cast<int>(rows[y].size()); ++x)
            if (rows[y][x] == '.') cells.emplace_back(x, y);
    auto starts = cells, goals = cells;
    std::shuffle(starts.begin(), starts.end(), rng);
    std::shuffle(goals.begin(), goals.end(), rng);
    starts.resize(agents);
    goals.resize(agents);
    return grid_instance(rows, starts, goals, neighborhood, radius);
}

inline std::vector<std::string> random_rows(int width, int height, double blocked, std::mt19937_64& rng) {
    std::bernoulli_distribution wall(blocked);
    std::vector<std::string> rows(height, std::string(width, '.'));
    for (auto& r : rows)
        for (char& c : r)
            if (wall(rng)) c = '@';
    return rows;
}

/// Every 2-agent instance on `rows` with distinct starts and distinct goals.
inline std::vector<Instance> all_two_agent(const std::vector<std::string>& rows, int neighborhood = 4) {
    std::vector<std::pair<int, int>> cells;
    for (int y = 0; y < static_cast<int>(rows.size()); ++y)
        for (int x = 0; x < static_cast<int>(rows[y].size()); ++x)
            if (rows[y][x] == '.') cells.emplace_back(x, y);
    std::vector<Instance> out;
    for (auto s0 : cells)
        for (auto s1 : cells)
            for (auto g0 : cells)
                for (auto g1 : cells)
                    if (s0 != s1 && g0 != g1) out.push_back(grid_instance(rows, {s0, s1}, {g0, g1}, neighborhood));
    return out;
}

/// Random walk of `steps` moves or waits from `start`.
inline Path walk(const Problem& p, VertexId start, int steps, std::mt19937_64& rng) {
    Path out{{{start, 0}}, {}};
    for (int i = 0; i < steps; ++i) {
        State here = out.states.back();
        const auto& edges = p.graph().out_edges(here.vertex);
        std::uniform_int_distribution<std::size_t> pick(0, edges.size());
        std::size_t k = pick(rng);
        if (k == edges.size()) {
            out.states.push_back({here.vertex, here.time + p.wait_ticks()});
            out.edges.push_back(kWaitEdge);
        } else {
            out.states.push_back({p.graph().edge(edges[k]).to, here.time + p.edge_ticks(edges[k])});
            out.edges.push_back(edges[k]);
        }
    }
    return out;
}

struct Brute {
    Tick anchor = std::numeric_limits<Tick>::max();
    Tick offset = 0;
};

// Enumerates every joint state S of loop starts (one per agent) with a common
// offset and pairwise-overlapping arrival actions.
inline std::optional<Brute> brute_trd(const Solution& sol, Tick wait) {
    Tick makespan = solution_makespan(sol);
    std::vector<std::vector<State>> ext;
    for (const Path& p : sol) ext.push_back(extended_states(p, makespan, wait));
    auto arrival = [&](std::size_t agent, std::size_t p) {
        const auto& s = ext[agent];
        State from = p == 0 ? s[0] : State{s[p - 1].vertex, s[p - 1].time};
        return Action{from, s[p], kWaitEdge};
    };
    std::optional<Brute> best;
    std::vector<std::size_t> pick(sol.size(), 0);
    const std::size_t k = sol.size();
    auto rec = [&](auto&& self, std::size_t agent) -> void {
        if (agent == k) {
            std::vector<Action> arrivals;
            for (std::size_t i = 0; i < k; ++i) arrivals.push_back(arrival(i, pick[i]));
            if (!joint_state_valid(arrivals)) return;
            JointState s;
            for (std::size_t i = 0; i < k; ++i) s.states.push_back(ext[i][pick[i]]);
            // Candidate offsets: any loop of agent 0 from its chosen start.
            for (std::size_t q = pick[0] + 1; q < ext[0].size(); ++q) {
                if (ext[0][q].vertex != ext[0][pick[0]].vertex) continue;
                Tick d = ext[0][q].time - ext[0][pick[0]].time;
                JointState s2;
                bool ok = true;
                for (std::size_t i = 0; i < k && ok; ++i) {
                    State target{ext[i][pick[i]].vertex, ext[i][pick[i]].time + d};
                    ok = std::find(ext[i].begin(), ext[i].end(), target) != ext[i].end();
                    s2.states.push_back(target);
                }
                if (!ok || !is_trd(s, s2)) continue;
                Brute b{t_min(s), d};
                if (!best || std::tie(b.anchor, b.offset) < std::tie(best->anchor, best->offset)) best = b;
            }
            return;
        }
        for (std::size_t p = 0; p < ext[agent].size(); ++p) {
            pick[agent] = p;
            self(self, agent + 1);
        }
    };
    rec(rec, 0);
    return best;
}

}  // namespace trdp::test
