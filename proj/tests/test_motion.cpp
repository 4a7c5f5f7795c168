#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace trdp;
using namespace trdp::test;

namespace {

Action act(const Graph& g, VertexId from, VertexId to, Tick depart, Tick duration) {
    if (from == to) return Action{{from, depart}, {to, depart + duration}, kWaitEdge};
    for (EdgeId e : g.out_edges(from))
        if (g.edge(e).to == to) return Action{{from, depart}, {to, depart + duration}, e};
    throw std::logic_error("no such edge");
}

bool contains(const Interval& outer, const Interval& inner) { return outer.lo <= inner.lo && inner.hi <= outer.hi; }

// Random move or wait on a grid graph with integer tick durations.
Action random_action(const Problem& p, std::mt19937_64& rng) {
    const Graph& g = p.graph();
    std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(g.vertex_count() - 1));
    std::uniform_int_distribution<Tick> depart(0, 6);
    VertexId v = vertex(rng);
    Tick t = depart(rng);
    const auto& out = g.out_edges(v);
    std::uniform_int_distribution<std::size_t> pick(0, out.size());
    std::size_t k = pick(rng);
    if (k == out.size()) return Action{{v, t}, {v, t + p.wait_ticks()}, kWaitEdge};
    EdgeId e = out[k];
    return Action{{v, t}, {g.edge(e).to, t + p.edge_ticks(e)}, e};
}

// Squared distance between the two centres at time t, by direct interpolation.
Rational distance2(const Action& a, const Action& b, const Rational& t, const Graph& g) {
    auto at = [&](const Action& x) {
        const Point& p = g.coords(x.from.vertex);
        const Point& q = g.coords(x.to.vertex);
        Rational f = x.to.time == x.from.time ? Rational(0) : (t - Rational(x.from.time)) / Rational(x.to.time - x.from.time);
        return std::pair{p.x + (q.x - p.x) * f, p.y + (q.y - p.y) * f};
    };
    auto [ax, ay] = at(a);
    auto [bx, by] = at(b);
    return (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
}

}  // namespace

TEST_CASE("actions_overlap") {
    Action a{{0, 0}, {1, 1}, 0}, b{{1, 0}, {0, 1}, 1};
    CHECK(actions_overlap(a, b));
    Action early{{0, 0}, {0, 2}, kWaitEdge}, late{{1, 2}, {1, 3}, kWaitEdge};
    CHECK(actions_overlap(early, late));  // shared boundary counts
    Action later{{1, 3}, {1, 4}, kWaitEdge};
    CHECK_FALSE(actions_overlap(early, later));
    CHECK_FALSE(actions_overlap(later, early));
}

TEST_CASE("collide examples") {
    Instance path3 = graph_fixture("path3.graph");
    const Graph& g = path3.graph;
    Action red = act(g, 0, 1, 0, 1), blue = act(g, 2, 1, 0, 1);
    auto hit = collide(red, blue, 0, g);
    REQUIRE(hit);
    CHECK(*hit == Interval{1, 1});

    Instance wide = grid_instance({"...........", "..........."}, {{0, 0}, {10, 0}}, {{0, 1}, {10, 1}});
    const Graph& w = wide.graph;
    CHECK_FALSE(collide(act(w, wide.starts[0], wide.starts[0], 0, 1), act(w, wide.starts[1], wide.starts[1], 0, 1), Rational(1, 4), w));

    Instance line = grid_instance({".."}, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}});
    Action there = act(line.graph, 0, 1, 0, 1), back = act(line.graph, 1, 0, 0, 1);
    auto head_on = collide(there, back, Rational(1, 4), line.graph);
    REQUIRE(head_on);
    CHECK(head_on->lo <= 0);
    CHECK(head_on->hi >= 1);
    CHECK(distance2(there, back, Rational(1, 2), line.graph) == 0);
    auto swap = collide(there, back, 0, line.graph);
    REQUIRE(swap);
    CHECK(*swap == Interval{0, 1});
    // Same direction one tick apart never meet.
    CHECK_FALSE(collide(there, act(line.graph, 0, 1, 1, 1), 0, line.graph));
}

TEST_CASE("collide properties") {
    std::mt19937_64 rng(11);
    const std::vector<Rational> radii{Rational(1, 8), Rational(1, 4), Rational(3, 10), Rational(1, 2), Rational(3, 4)};
    Instance open = grid_instance({"....", "....", "...."}, {{0, 0}}, {{3, 2}}, 8);
    Problem p(open);
    int classic = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Action a = random_action(p, rng), b = random_action(p, rng);
        auto zero = collide(a, b, 0, p.graph());
        CHECK(zero == collide(b, a, 0, p.graph()));
        if (zero) {
            ++classic;
            CHECK(actions_overlap(a, b));
        }
        std::optional<Interval> previous = zero;
        for (const Rational& r : radii) {
            auto hit = collide(a, b, r, p.graph());
            auto mirror = collide(b, a, r, p.graph());
            CHECK(hit == mirror);
            if (hit) CHECK(actions_overlap(a, b));
            if (previous) {
                REQUIRE(hit);
                if (!zero || previous != zero) CHECK(contains(*hit, *previous));
            }
            if (hit) previous = hit;
        }
    }
    CHECK(classic > 100);
}

TEST_CASE("collide never misses a sampled overlap") {
    std::mt19937_64 rng(12);
    Instance open = grid_instance({"...", "...", "..."}, {{0, 0}}, {{2, 2}}, 16);
    Problem p(open);
    const Rational radius(1, 4);
    for (int trial = 0; trial < 2000; ++trial) {
        Action a = random_action(p, rng), b = random_action(p, rng);
        Tick lo = std::max(a.from.time, b.from.time), hi = std::min(a.to.time, b.to.time);
        auto hit = collide(a, b, radius, p.graph());
        if (lo > hi) {
            CHECK_FALSE(hit);
            continue;
        }
        for (int step = 0; step <= 32 * (hi - lo); ++step) {
            Rational t = Rational(lo) + Rational(step, 32);
            if (distance2(a, b, t, p.graph()) < Rational(4) * radius * radius) {
                REQUIRE(hit);
                CHECK(Rational(hit->lo) <= t);
                CHECK(t <= Rational(hit->hi));
            }
        }
    }
}

TEST_CASE("find_first_conflict and constraints_from_conflict") {
    Instance path3 = graph_fixture("path3.graph");
    Problem p(path3);
    Path red{{{0, 0}, {1, 1}, {2, 2}}, {}}, blue{{{2, 0}, {1, 1}, {0, 2}}, {}};
    auto edge = [&](VertexId a, VertexId b) {
        for (EdgeId e : p.graph().out_edges(a))
            if (p.graph().edge(e).to == b) return e;
        return kWaitEdge;
    };
    red.edges = {edge(0, 1), edge(1, 2)};
    blue.edges = {edge(2, 1), edge(1, 0)};
    Solution root{red, blue};
    auto conflict = find_first_conflict(root, p);
    REQUIRE(conflict);
    CHECK(conflict->agent_i == 0);
    CHECK(conflict->agent_j == 1);
    CHECK(conflict->interval == Interval{1, 1});
    CHECK(count_conflicting_pairs(root, p) == 1);
    auto [ci, cj] = constraints_from_conflict(*conflict, p);
    CHECK(ci == Constraint{0, VertexConstraint{1, 1}});
    CHECK(cj == Constraint{1, VertexConstraint{1, 1}});

    Solution single{red};
    CHECK_FALSE(find_first_conflict(single, p));

    MotionConflict bogus = *conflict;
    bogus.action_j = Action{{2, 5}, {2, 6}, kWaitEdge};
    CHECK_THROWS_AS(constraints_from_conflict(bogus, p), UsageError);
    bogus = *conflict;
    bogus.agent_j = 0;
    CHECK_THROWS_AS(constraints_from_conflict(bogus, p), UsageError);

    // Swapping across one edge gives action constraints on both sides.
    Instance line = grid_instance({".."}, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}});
    Problem q(line);
    Path left{{{0, 0}, {1, 1}}, {q.graph().out_edges(0)[0]}}, right{{{1, 0}, {0, 1}}, {q.graph().out_edges(1)[0]}};
    Solution swap{left, right};
    auto sc = find_first_conflict(swap, q);
    REQUIRE(sc);
    auto [si, sj] = constraints_from_conflict(*sc, q);
    CHECK(std::holds_alternative<ActionConstraint>(si.blocked));
    CHECK(std::holds_alternative<ActionConstraint>(sj.blocked));
    CHECK(si.blocks(Action{left.states[0], left.states[1], left.edges[0]}));
    CHECK_FALSE(si.blocks(Action{{0, 1}, {1, 2}, left.edges[0]}));

    // Disjoint components never conflict.
    Instance apart = grid_instance({".@."}, {{0, 0}, {2, 0}}, {{0, 0}, {2, 0}});
    Problem r(apart);
    Solution still{Path{{{0, 0}}, {}}, Path{{{1, 0}}, {}}};
    CHECK_FALSE(find_first_conflict(still, r));
}

TEST_CASE("constraint semantics") {
    Constraint vc{0, VertexConstraint{3, 4}};
    CHECK(vc.blocks(Action{{3, 2}, {3, 5}, kWaitEdge}));
    CHECK(vc.blocks(Action{{1, 3}, {3, 4}, 7}));
    CHECK_FALSE(vc.blocks(Action{{1, 4}, {2, 5}, 7}));
    CHECK(vc.latest_time() == 4);
    Constraint ac{1, ActionConstraint{2, 5, 3, 4}};
    CHECK(ac.blocks(Action{{2, 3}, {4, 4}, 5}));
    CHECK_FALSE(ac.blocks(Action{{2, 4}, {4, 5}, 5}));
    Constraint wc{1, ActionConstraint{2, kWaitEdge, 3, 4}};
    CHECK(wc.blocks(Action{{2, 3}, {2, 4}, kWaitEdge}));
    CHECK_FALSE(wc.blocks(Action{{1, 3}, {1, 4}, kWaitEdge}));
    CHECK(vc.to_string() == "<0,v3,4>");
}
