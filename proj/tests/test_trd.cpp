#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>

#include "support.hpp"

using namespace trdp;
using namespace trdp::test;

namespace {

JointState js(std::initializer_list<State> states) { return JointState{states}; }

}  // namespace

TEST_CASE("t_min, t_max, delta_t, is_trd") {
    // Times in tenths.
    JointState s = js({{1, 1}, {3, 2}}), s2 = js({{1, 2}, {3, 3}}), s3 = js({{1, 1}, {3, 3}});
    CHECK(t_min(s) == 1);
    CHECK(t_max(s) == 2);
    CHECK(t_min(js({{4, 3}})) == 3);
    CHECK(t_max(js({{4, 3}})) == 3);
    CHECK(delta_t(s) == js({{1, 0}, {3, 1}}));
    CHECK(delta_t(s2) == js({{1, 0}, {3, 1}}));
    CHECK(is_trd(s, s2));
    CHECK_FALSE(is_trd(s, s3));
    CHECK(is_trd(s, s));
    CHECK_FALSE(is_trd(s, js({{2, 2}, {3, 3}})));
    CHECK_THROWS_AS(t_min(JointState{}), UsageError);
    CHECK_THROWS_AS(is_trd(s, js({{1, 1}})), UsageError);
}

TEST_CASE("delta_t and is_trd properties") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<Tick> t(0, 50), v(0, 3), shift(-20, 20);
    for (int trial = 0; trial < 5000; ++trial) {
        JointState a, b;
        for (int i = 0; i < 3; ++i) {
            a.states.push_back({static_cast<VertexId>(v(rng)), t(rng)});
            b.states.push_back({static_cast<VertexId>(v(rng)), t(rng)});
        }
        CHECK(delta_t(delta_t(a)) == delta_t(a));
        CHECK(t_min(delta_t(a)) == 0);
        Tick tau = shift(rng);
        JointState as = a, bs = b, a_shift = a;
        for (auto& m : as.states) m.time += tau;
        for (auto& m : bs.states) m.time += tau;
        CHECK(is_trd(a, b) == is_trd(as, bs));
        Tick other = shift(rng);
        for (auto& m : a_shift.states) m.time += other;
        CHECK(is_trd(a, a_shift));
    }
}

TEST_CASE("find_single_agent_loops") {
    Path simple{{{0, 0}, {1, 1}, {2, 2}}, {0, 1}};
    CHECK(find_single_agent_loops(simple, 2, 1).empty());
    Path waits{{{0, 0}, {0, 1}, {1, 2}}, {kWaitEdge, 0}};
    auto loops = find_single_agent_loops(waits, 2, 1);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0] == LoopOccurrence{0, {0, 0}, {0, 1}, 1});
    Path early{{{0, 0}, {1, 1}, {2, 2}}, {0, 1}};
    auto goal = find_single_agent_loops(early, 4, 1);
    REQUIRE(goal.size() == 3);
    CHECK(goal[0] == LoopOccurrence{0, {2, 2}, {2, 3}, 1});
    CHECK(goal[1] == LoopOccurrence{0, {2, 2}, {2, 4}, 2});
    CHECK(goal[2] == LoopOccurrence{0, {2, 3}, {2, 4}, 1});
    CHECK(extended_states(early, 5, 2).size() == 4);
}

TEST_CASE("find_trds examples") {
    // Both agents wait once at their starts: a joint loop of offset one tick.
    Path a{{{0, 0}, {0, 1}, {1, 2}}, {kWaitEdge, 0}};
    Path b{{{2, 0}, {2, 1}, {1, 2}}, {kWaitEdge, 1}};
    Solution both{a, b};
    auto found = detect_trd(both, 1);
    REQUIRE(found);
    CHECK(found->offset == 1);
    CHECK(found->loop_start == js({{0, 0}, {2, 0}}));
    CHECK(found->loop_end == js({{0, 1}, {2, 1}}));
    REQUIRE(found->constraints.size() == 2);
    CHECK(found->constraints[0] == TrdConstraint{0, 0, 1, 1});
    CHECK(found->constraints[1] == TrdConstraint{1, 0, 1, 1});
    CHECK(found->constraints[0].to_string() == "<0,[0,1),1>");

    // Only one of the two paths loops.
    Path straight{{{2, 0}, {3, 1}, {4, 2}}, {1, 2}};
    Solution one{a, straight};
    CHECK_FALSE(find_trds(one, 1));

    // Loop-free paths of equal length.
    Path s1{{{0, 0}, {1, 1}}, {0}}, s2{{{3, 0}, {4, 1}}, {1}};
    Solution none{s1, s2};
    CHECK_FALSE(find_trds(none, 1));

    // Loop starts at different instants widen the window.
    Path late{{{5, 0}, {6, 1}, {6, 2}, {7, 3}}, {3, kWaitEdge, 4}};
    Path first{{{0, 0}, {0, 1}, {0, 2}, {1, 3}}, {kWaitEdge, kWaitEdge, 0}};
    Solution spread{first, late};
    auto w = detect_trd(spread, 1);
    REQUIRE(w);
    CHECK(w->loop_start == js({{0, 0}, {6, 1}}));
    CHECK(w->constraints[0] == TrdConstraint{0, 0, 2, 1});
    CHECK_THROWS_AS(find_trds(Solution{}, 1), UsageError);
}

TEST_CASE("find_trds matches brute force and loops are real") {
    std::mt19937_64 rng(22);
    Instance inst = grid_instance({"..", ".."}, {{0, 0}}, {{1, 1}}, 4);
    Problem p(inst);
    std::uniform_int_distribution<int> agents(1, 3), steps(0, 8);
    std::uniform_int_distribution<VertexId> start(0, 3);
    int found_count = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Solution sol;
        int k = agents(rng);
        for (int i = 0; i < k; ++i) sol.push_back(walk(p, start(rng), steps(rng), rng));
        auto got = detect_trd(sol, p.wait_ticks());
        auto want = brute_trd(sol, p.wait_ticks());
        REQUIRE(got.has_value() == want.has_value());
        if (!got) continue;
        ++found_count;
        CHECK(t_min(got->loop_start) == want->anchor);
        CHECK(got->offset == want->offset);
        CHECK(is_trd(got->loop_start, got->loop_end));
        Tick makespan = solution_makespan(sol);
        for (const TrdConstraint& c : got->constraints) {
            auto ext = extended_states(sol[c.agent], makespan, p.wait_ticks());
            bool real = false;
            for (const State& s : ext)
                if (c.is_candidate(s.time) && std::find(ext.begin(), ext.end(), State{s.vertex, s.time + c.offset}) != ext.end())
                    real = true;
            CHECK(real);
        }
    }
    CHECK(found_count > 1000);
}

TEST_CASE("detection cost stays polynomial in makespan") {
    std::mt19937_64 rng(23);
    Instance inst = grid_instance({"....", "....", "....", "...."}, {{0, 0}}, {{3, 3}}, 4);
    Problem p(inst);
    auto seconds = [&](int steps) {
        auto t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 20; ++rep) {
            Solution sol;
            for (int i = 0; i < 4; ++i) sol.push_back(walk(p, static_cast<VertexId>(i), steps, rng));
            (void)detect_trd(sol, 1);
        }
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    double short_run = seconds(50), long_run = seconds(200);
    // Quadratic growth would be 16x; allow generous noise.
    CHECK(long_run < 64 * short_run + 0.05);
}
