#include "trdp/graph.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <utility>

namespace trdp {

VertexId Graph::add_vertex(Point coords) {
    coords_.push_back(std::move(coords));
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<VertexId>(coords_.size() - 1);
}

EdgeId Graph::push(VertexId from, VertexId to, Time weight, std::int32_t link) {
    if (!has_vertex(from) || !has_vertex(to)) throw UsageError("edge endpoint out of range");
    if (weight.is_zero()) throw UsageError("edge weights must be strictly positive");
    if (from == to) throw UsageError("explicit self-loops are not allowed; waits are implicit");
    auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{from, to, weight, link});
    out_[from].push_back(id);
    in_[to].push_back(id);
    return id;
}

EdgeId Graph::add_arc(VertexId from, VertexId to, Time weight) { return push(from, to, weight, next_link_++); }

EdgeId Graph::add_edge(VertexId a, VertexId b, Time weight) {
    std::int32_t link = next_link_++;
    EdgeId first = push(a, b, weight, link);
    push(b, a, weight, link);
    return first;
}

std::size_t Grid::open_count() const { return static_cast<std::size_t>(std::count(open.begin(), open.end(), true)); }

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == text.size()) break;
        pos = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string> tokens(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

int header_int(const std::vector<std::string_view>& lines, std::size_t index, std::string_view key) {
    int line_no = static_cast<int>(index) + 1;
    if (index >= lines.size()) throw ParseError(line_no, "missing '" + std::string(key) + "' header");
    auto toks = tokens(lines[index]);
    if (toks.size() != 2 || toks[0] != key) throw ParseError(line_no, "expected '" + std::string(key) + " N'");
    try {
        std::size_t used = 0;
        int value = std::stoi(toks[1], &used);
        if (used != toks[1].size() || value <= 0) throw std::invalid_argument("bad");
        return value;
    } catch (const std::exception&) {
        throw ParseError(line_no, "invalid " + std::string(key) + " '" + toks[1] + "'");
    }
}

}  // namespace

Grid load_movingai_map(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty() || tokens(lines[0]).empty() || tokens(lines[0])[0] != "type") throw ParseError(1, "expected 'type' header");
    Grid grid;
    grid.height = header_int(lines, 1, "height");
    grid.width = header_int(lines, 2, "width");
    if (lines.size() < 4 || tokens(lines[3]) != std::vector<std::string>{"map"}) throw ParseError(4, "expected 'map'");
    if (lines.size() - 4 < static_cast<std::size_t>(grid.height))
        throw ParseError(static_cast<int>(lines.size()) + 1, "expected " + std::to_string(grid.height) + " map rows");
    grid.open.reserve(static_cast<std::size_t>(grid.width) * grid.height);
    for (int y = 0; y < grid.height; ++y) {
        std::string_view row = lines[4 + y];
        int line_no = 5 + y;
        if (static_cast<int>(row.size()) != grid.width)
            throw ParseError(line_no, "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(grid.width));
        for (char c : row) {
            switch (c) {
            case '.':
            case 'G':
            case 'S':
                grid.open.push_back(true);
                break;
            case '@':
            case 'O':
            case 'T':
            case 'W':
                grid.open.push_back(false);
                break;
            default:
                throw ParseError(line_no, std::string("unknown map cell '") + c + "'");
            }
        }
    }
    return grid;
}

std::optional<VertexId> GridGraph::vertex_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width) return std::nullopt;
    std::size_t idx = static_cast<std::size_t>(y) * width + x;
    if (idx >= cell_vertex.size() || cell_vertex[idx] < 0) return std::nullopt;
    return cell_vertex[idx];
}

namespace {

// First-octant move offsets of each neighborhood; the full set adds all sign
// and axis permutations.
std::vector<std::pair<int, int>> move_set(int neighborhood) {
    std::vector<std::pair<int, int>> base;
    switch (neighborhood) {
    case 32:
        base.insert(base.end(), {{1, 3}, {3, 1}, {2, 3}, {3, 2}});
        [[fallthrough]];
    case 16:
        base.insert(base.end(), {{1, 2}, {2, 1}});
        [[fallthrough]];
    case 8:
        base.push_back({1, 1});
        [[fallthrough]];
    case 4:
        base.push_back({1, 0});
        base.push_back({0, 1});
        break;
    default:
        throw UsageError("neighborhood must be one of 4, 8, 16, 32");
    }
    std::vector<std::pair<int, int>> moves;
    for (auto [dx, dy] : base) {
        for (int sx : {1, -1}) {
            for (int sy : {1, -1}) {
                if ((dx == 0 && sx < 0) || (dy == 0 && sy < 0)) continue;
                moves.emplace_back(dx * sx, dy * sy);
            }
        }
    }
    std::sort(moves.begin(), moves.end());
    return moves;
}

bool corridor_open(const Grid& grid, int x, int y, int dx, int dy) {
    int x0 = std::min(x, x + dx), x1 = std::max(x, x + dx);
    int y0 = std::min(y, y + dy), y1 = std::max(y, y + dy);
    for (int cy = y0; cy <= y1; ++cy)
        for (int cx = x0; cx <= x1; ++cx)
            if (!grid.is_open(cx, cy)) return false;
    return true;
}

}  // namespace

GridGraph grid_to_graph(const Grid& grid, int neighborhood, std::int64_t resolution) {
    if (grid.width <= 0 || grid.height <= 0) throw UsageError("grid must be nonempty");
    auto moves = move_set(neighborhood);
    GridGraph out;
    out.width = grid.width;
    out.cell_vertex.assign(static_cast<std::size_t>(grid.width) * grid.height, -1);
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
            if (grid.is_open(x, y))
                out.cell_vertex[static_cast<std::size_t>(y) * grid.width + x] = out.graph.add_vertex(Point{x, y});

    // Each undirected move is added once, from the cell that comes first in row-major order.
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            if (!grid.is_open(x, y)) continue;
            VertexId from = *out.vertex_at(x, y);
            for (auto [dx, dy] : moves) {
                if (dy < 0 || (dy == 0 && dx < 0)) continue;
                if (!corridor_open(grid, x, y, dx, dy)) continue;
                VertexId to = *out.vertex_at(x + dx, y + dy);
                out.graph.add_edge(from, to, quantize_sqrt(dx * dx + dy * dy, resolution));
            }
        }
    }
    return out;
}

AgentEndpoints load_scen(std::string_view text, int agents, const GridGraph& grid) {
    if (agents < 0) throw UsageError("agent count must be nonnegative");
    auto lines = split_lines(text);
    AgentEndpoints out;
    std::size_t first = 0;
    if (!lines.empty() && tokens(lines[0]).size() >= 1 && tokens(lines[0])[0] == "version") first = 1;
    for (std::size_t i = first; i < lines.size() && static_cast<int>(out.starts.size()) < agents; ++i) {
        int line_no = static_cast<int>(i) + 1;
        auto toks = tokens(lines[i]);
        if (toks.empty()) continue;
        if (toks.size() != 9) throw ParseError(line_no, "scenario entry needs 9 fields, found " + std::to_string(toks.size()));
        int coords[4];
        try {
            for (int k = 0; k < 4; ++k) coords[k] = std::stoi(toks[4 + k]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "invalid scenario coordinates");
        }
        int agent = static_cast<int>(out.starts.size());
        auto s = grid.vertex_at(coords[0], coords[1]);
        auto g = grid.vertex_at(coords[2], coords[3]);
        if (!s) throw ParseError(line_no, "agent " + std::to_string(agent) + " start is blocked or off the map");
        if (!g) throw ParseError(line_no, "agent " + std::to_string(agent) + " goal is blocked or off the map");
        out.starts.push_back(*s);
        out.goals.push_back(*g);
    }
    if (static_cast<int>(out.starts.size()) < agents)
        throw UsageError("scenario has " + std::to_string(out.starts.size()) + " entries, " + std::to_string(agents) + " requested");
    return out;
}

Timing compute_timing(const Instance& instance) {
    std::vector<Time> durations;
    durations.reserve(instance.graph.edge_count() + 1);
    for (const Edge& e : instance.graph.edges()) durations.push_back(e.weight);
    durations.push_back(instance.wait_duration);
    Timing timing;
    timing.tick = gcd_all(durations);
    timing.edge_ticks.reserve(instance.graph.edge_count());
    timing.max_edge_ticks = 1;
    for (const Edge& e : instance.graph.edges()) {
        timing.edge_ticks.push_back(e.weight.divide_exact(timing.tick));
        timing.max_edge_ticks = std::max(timing.max_edge_ticks, timing.edge_ticks.back());
    }
    timing.wait_ticks = instance.wait_duration.divide_exact(timing.tick);
    timing.max_edge_ticks = std::max(timing.max_edge_ticks, timing.wait_ticks);
    return timing;
}

Instance load_graph_file(std::string_view text) {
    Instance inst;
    auto lines = split_lines(text);
    auto vertex_arg = [&](const std::string& tok, int line_no) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("bad");
            return static_cast<VertexId>(v);
        } catch (const std::exception&) {
            throw ParseError(line_no, "invalid vertex id '" + tok + "'");
        }
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        auto toks = tokens(lines[i]);
        if (toks.empty() || toks[0].starts_with('#')) continue;
        const std::string& kind = toks[0];
        auto want = [&](std::size_t n) {
            if (toks.size() != n) throw ParseError(line_no, "'" + kind + "' expects " + std::to_string(n - 1) + " arguments");
        };
        try {
            if (kind == "v") {
                want(3);
                inst.graph.add_vertex(Point{parse_rational(toks[1]), parse_rational(toks[2])});
            } else if (kind == "e" || kind == "a") {
                want(4);
                VertexId u = vertex_arg(toks[1], line_no);
                VertexId v = vertex_arg(toks[2], line_no);
                Time w = parse_time(toks[3]);
                if (kind == "e")
                    inst.graph.add_edge(u, v, w);
                else
                    inst.graph.add_arc(u, v, w);
            } else if (kind == "agent") {
                want(3);
                inst.starts.push_back(vertex_arg(toks[1], line_no));
                inst.goals.push_back(vertex_arg(toks[2], line_no));
            } else if (kind == "wait") {
                want(2);
                inst.wait_duration = parse_time(toks[1]);
            } else if (kind == "radius") {
                want(2);
                inst.radius = parse_rational(toks[1]);
            } else if (kind == "resolution") {
                want(2);
                inst.resolution = parse_rational(toks[1]).num();
            } else if (kind == "name") {
                want(2);
                inst.name = toks[1];
            } else {
                throw ParseError(line_no, "unknown record '" + kind + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return inst;
}

std::string Violation::to_string() const {
    static constexpr std::array names{"DistinctStarts", "DistinctGoals", "StartInvalid", "GoalInvalid", "AgentCountMismatch", "NoAgents", "WaitNotPositive", "RadiusNegative"};
    std::string out = names[static_cast<std::size_t>(kind)];
    out += "(";
    for (std::size_t i = 0; i < agents.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(agents[i]);
    }
    return out + ")";
}

std::vector<Violation> validate_instance(const Instance& instance) {
    using Kind = Violation::Kind;
    std::vector<Violation> out;
    if (instance.starts.size() != instance.goals.size()) out.push_back({Kind::AgentCountMismatch, {}});
    if (instance.starts.empty()) out.push_back({Kind::NoAgents, {}});
    auto pairwise = [&](const std::vector<VertexId>& vs, Kind kind) {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (vs[i] == vs[j]) out.push_back({kind, {static_cast<int>(i), static_cast<int>(j)}});
    };
    pairwise(instance.starts, Kind::DistinctStarts);
    pairwise(instance.goals, Kind::DistinctGoals);
    for (std::size_t i = 0; i < instance.starts.size(); ++i)
        if (!instance.graph.has_vertex(instance.starts[i])) out.push_back({Kind::StartInvalid, {static_cast<int>(i)}});
    for (std::size_t i = 0; i < instance.goals.size(); ++i)
        if (!instance.graph.has_vertex(instance.goals[i])) out.push_back({Kind::GoalInvalid, {static_cast<int>(i)}});
    if (instance.wait_duration.is_zero()) out.push_back({Kind::WaitNotPositive, {}});
    if (instance.radius.sign() < 0) out.push_back({Kind::RadiusNegative, {}});
    return out;
}

}  // namespace trdp
