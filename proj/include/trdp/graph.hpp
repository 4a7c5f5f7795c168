#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trdp/rational.hpp"

namespace trdp {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
/// Integer multiple of an instance's time unit. All solver arithmetic uses ticks.
using Tick = std::int64_t;

inline constexpr EdgeId kWaitEdge = -1;

/// Input text that does not follow its file format; carries the 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct Point {
    Rational x;
    Rational y;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Directed edge. An undirected input edge becomes two Edges sharing `link`.
struct Edge {
    VertexId from = 0;
    VertexId to = 0;
    Time weight;
    std::int32_t link = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

class Graph {
public:
    VertexId add_vertex(Point coords);
    /// Adds one directed edge with its own link id.
    EdgeId add_arc(VertexId from, VertexId to, Time weight);
    /// Adds the two directed halves of an undirected edge; returns the first id.
    EdgeId add_edge(VertexId a, VertexId b, Time weight);

    std::size_t vertex_count() const { return coords_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool has_vertex(VertexId v) const { return v >= 0 && static_cast<std::size_t>(v) < coords_.size(); }

    const Point& coords(VertexId v) const { return coords_.at(v); }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    /// Outgoing edge ids of `v` in insertion order.
    const std::vector<EdgeId>& out_edges(VertexId v) const { return out_.at(v); }
    const std::vector<EdgeId>& in_edges(VertexId v) const { return in_.at(v); }

private:
    EdgeId push(VertexId from, VertexId to, Time weight, std::int32_t link);

    std::vector<Point> coords_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::int32_t next_link_ = 0;
};

/// Row-major traversability grid; cell (x, y) with y counted from the top row.
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<bool> open;

    bool is_open(int x, int y) const {
        return x >= 0 && y >= 0 && x < width && y < height && open[static_cast<std::size_t>(y) * width + x];
    }
    std::size_t open_count() const;
};

Grid load_movingai_map(std::string_view text);

struct GridGraph {
    Graph graph;
    /// Vertex per cell index (y * width + x), or -1 for blocked cells.
    std::vector<VertexId> cell_vertex;
    int width = 0;

    std::optional<VertexId> vertex_at(int x, int y) const;
};

/// One vertex per open cell (row-major order), edges for every move of the
/// 2^k neighborhood whose cell bounding box is fully open.
GridGraph grid_to_graph(const Grid& grid, int neighborhood, std::int64_t resolution);

struct AgentEndpoints {
    std::vector<VertexId> starts;
    std::vector<VertexId> goals;
};

/// Reads the first `agents` entries of a MovingAI .scen file.
AgentEndpoints load_scen(std::string_view text, int agents, const GridGraph& grid);

/// Exact tick representation of an instance's durations.
struct Timing {
    Time tick;
    std::vector<Tick> edge_ticks;
    Tick wait_ticks = 1;
    Tick max_edge_ticks = 1;

    Time to_time(Tick t) const { return tick * t; }
};

struct Instance {
    Graph graph;
    std::vector<VertexId> starts;
    std::vector<VertexId> goals;
    Rational radius;
    Time wait_duration{1};
    int neighborhood = 0;  // 0 when not grid-derived
    std::int64_t resolution = 100;
    std::string name;

    std::size_t agent_count() const { return starts.size(); }
};

/// Rescales all durations into integer ticks of gcd(weights ∪ {wait}).
Timing compute_timing(const Instance& instance);

/// Native weighted-digraph format. Line kinds (blank lines and '#' comments ignored):
///   v X Y          vertex with the next dense id
///   e U V W        undirected edge (two directed halves)
///   a U V W        directed edge U -> V
///   agent S G      agent start and goal vertex ids
///   wait W | radius R | resolution R | name TEXT
Instance load_graph_file(std::string_view text);

struct Violation {
    enum class Kind { DistinctStarts, DistinctGoals, StartInvalid, GoalInvalid, AgentCountMismatch, NoAgents, WaitNotPositive, RadiusNegative };
    Kind kind;
    std::vector<int> agents;

    friend bool operator==(const Violation&, const Violation&) = default;
    std::string to_string() const;
};

std::vector<Violation> validate_instance(const Instance& instance);

}  // namespace trdp
