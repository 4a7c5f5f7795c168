#include "trdp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace trdp {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string time_text(const Problem& problem, Tick t) { return problem.timing().to_time(t).to_string(); }

Json report_json(const RunConfig& config, const Problem& problem, const Outcome* cbs, const OracleOutcome* oracle) {
    const Instance& inst = problem.instance();
    Json j;
    j["schema"] = 1;
    Json instance;
    instance["name"] = inst.name;
    instance["source"] = config.input.graph.empty() ? config.input.map + " " + config.input.scen : config.input.graph;
    instance["vertices"] = inst.graph.vertex_count();
    instance["edges"] = inst.graph.edge_count();
    instance["agents"] = inst.agent_count();
    instance["neighborhood"] = inst.neighborhood;
    instance["radius"] = inst.radius.to_string();
    instance["wait"] = inst.wait_duration.to_string();
    instance["tick"] = problem.timing().tick.to_string();
    j["instance"] = instance;

    Json cfg;
    cfg["solver"] = config.engine;
    cfg["objective"] = to_string(config.solver.objective);
    cfg["trdp"] = config.solver.trdp ? "on" : "off";
    cfg["bypass"] = config.solver.bypass ? "on" : "off";
    cfg["node_limit"] = config.solver.ct_node_limit;
    cfg["time_limit"] = config.solver.time_limit;
    j["config"] = cfg;

    OutcomeKind kind = cbs ? cbs->kind : oracle->kind;
    j["outcome"] = to_string(kind);
    if (cbs && kind == OutcomeKind::LimitExhausted) j["limit"] = cbs->limit;
    if (kind == OutcomeKind::Solved) {
        Tick cost = cbs ? cbs->cost : oracle->cost;
        j["cost"] = time_text(problem, cost);
    } else {
        j["cost"] = nullptr;
    }

    Json stats;
    if (cbs) {
        const SolveStats& s = cbs->stats;
        stats["ct_generated"] = s.ct_generated;
        stats["ct_expanded"] = s.ct_expanded;
        stats["trd_conflicts"] = s.trd_conflicts;
        stats["motion_conflicts"] = s.motion_conflicts;
        stats["bypasses"] = s.bypasses;
        stats["trd_splits"] = s.trd_splits;
        stats["low_level_expansions"] = s.low_level_expansions;
        if (config.timing) {
            stats["trd_check_time"] = s.trd_check_seconds;
            stats["total_time"] = s.elapsed_seconds;
        }
    } else {
        stats["expanded"] = oracle->expanded;
    }
    j["stats"] = stats;

    CtBound bound = ct_upper_bound(problem, kind == OutcomeKind::Solved && cbs ? std::optional<Tick>(cbs->cost) : std::nullopt);
    Json b;
    b["log2"] = bound.exponent.str();
    if (bound.cost_bound) b["with_cost"] = bound.cost_bound->str();
    j["ct_bound"] = b;

    Json paths = Json::array();
    if (cbs && kind == OutcomeKind::Solved) {
        for (const Path& p : cbs->solution) {
            Json path = Json::array();
            for (const State& s : p.states) path.push_back(Json::array({s.vertex, time_text(problem, s.time)}));
            paths.push_back(path);
        }
    }
    j["paths"] = paths;
    return j;
}

void report_text(std::ostream& out, const Json& j) {
    out << "instance " << j["instance"]["name"].get<std::string>() << " (" << j["instance"]["agents"].get<std::size_t>()
        << " agents, " << j["instance"]["vertices"].get<std::size_t>() << " vertices)\n";
    out << "outcome " << j["outcome"].get<std::string>();
    if (j.contains("limit")) out << " (" << j["limit"].get<std::string>() << ")";
    out << "\n";
    if (!j["cost"].is_null()) out << "cost " << j["cost"].get<std::string>() << "\n";
    for (const auto& [key, value] : j["stats"].items()) out << key << " " << value.dump() << "\n";
    int agent = 0;
    for (const auto& path : j["paths"]) {
        out << "agent " << agent++ << ":";
        for (const auto& s : path) out << " (" << s[0].get<int>() << "," << s[1].get<std::string>() << ")";
        out << "\n";
    }
}

std::string join_relative(const std::filesystem::path& base, const std::string& p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (base / p).string();
}

void add_run_options(CLI::App& app, RunConfig& config, std::string& radius, std::string& objective, std::string& trdp,
                     std::string& bypass) {
    app.add_option("--map", config.input.map, "MovingAI .map file");
    app.add_option("--scen", config.input.scen, "MovingAI .scen file");
    app.add_option("--graph", config.input.graph, "native .graph instance");
    app.add_option("--agents", config.input.agents, "number of scenario agents")->check(CLI::NonNegativeNumber);
    app.add_option("--neighbors", config.input.neighbors, "grid neighborhood")->check(CLI::IsMember({4, 8, 16, 32}));
    app.add_option("--radius", radius, "agent radius (rational)");
    app.add_option("--resolution", config.input.resolution, "grid edge-weight resolution")->check(CLI::PositiveNumber);
    app.add_option("--objective", objective, "flowtime or makespan")->check(CLI::IsMember({"flowtime", "makespan"}));
    app.add_option("--trdp", trdp, "on or off")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--bypass", bypass, "on or off")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--solver", config.engine, "cbs or oracle")->check(CLI::IsMember({"cbs", "oracle"}));
    app.add_option("--time-limit", config.solver.time_limit, "seconds, 0 = none")->check(CLI::NonNegativeNumber);
    app.add_option("--node-limit", config.solver.ct_node_limit, "generated nodes, 0 = none")->check(CLI::NonNegativeNumber);
    app.add_option("--out", config.out, "json or text")->check(CLI::IsMember({"json", "text"}));
}

void finish_run_options(RunConfig& config, const std::string& radius, const std::string& objective, const std::string& trdp,
                        const std::string& bypass) {
    if (!radius.empty()) config.input.radius = parse_rational(radius);
    config.solver.objective = objective == "makespan" ? Objective::Makespan : Objective::Flowtime;
    config.solver.trdp = trdp == "on";
    config.solver.bypass = bypass == "on";
}

std::optional<RunConfig> parse_run(const std::vector<std::string>& args, std::ostream& err) {
    CLI::App app{"run"};
    RunConfig config;
    std::string radius, objective = "flowtime", trdp = "on", bypass = "on";
    add_run_options(app, config, radius, objective, trdp, bypass);
    bool no_timing = false;
    app.add_flag("--no-timing", no_timing);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        finish_run_options(config, radius, objective, trdp, bypass);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return std::nullopt;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return std::nullopt;
    }
    config.timing = !no_timing;
    return config;
}

struct Sample {
    std::string outcome;
    std::string cost;
    std::int64_t ct_generated = 0;
    std::int64_t trd_conflicts = 0;
    std::int64_t bypasses = 0;
    double total = 0;
    double trd_check = 0;
};

struct Summary {
    Sample last;
    double total_mean = 0, total_sd = 0, trd_mean = 0, trd_sd = 0;
};

Summary summarize(const std::vector<Sample>& samples) {
    Summary s;
    s.last = samples.back();
    auto stat = [&](auto field, double& mean, double& sd) {
        double sum = 0, sq = 0;
        for (const Sample& x : samples) sum += field(x);
        mean = sum / samples.size();
        for (const Sample& x : samples) sq += (field(x) - mean) * (field(x) - mean);
        sd = samples.size() > 1 ? std::sqrt(sq / (samples.size() - 1)) : 0.0;
    };
    stat([](const Sample& x) { return x.total; }, s.total_mean, s.total_sd);
    stat([](const Sample& x) { return x.trd_check; }, s.trd_mean, s.trd_sd);
    return s;
}

struct BenchRow {
    std::string label;
    std::string error;
    Summary on;
    Summary off;
};

Sample measure(const RunConfig& config) {
    Problem problem(load_instance(config.input));
    Outcome o = solve(problem, config.solver);
    Sample s;
    s.outcome = to_string(o.kind);
    s.cost = o.kind == OutcomeKind::Solved ? time_text(problem, o.cost) : "-";
    s.ct_generated = o.stats.ct_generated;
    s.trd_conflicts = o.stats.trd_conflicts;
    s.bypasses = o.stats.bypasses;
    s.total = o.stats.elapsed_seconds;
    s.trd_check = o.stats.trd_check_seconds;
    return s;
}

BenchRow bench_row(const std::string& line, const std::filesystem::path& base, int repeat) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    BenchRow row;
    row.label = tokens.front();
    std::vector<std::string> args(tokens.begin() + 1, tokens.end());
    std::ostringstream errors;
    auto config = parse_run(args, errors);
    if (!config) {
        row.error = errors.str();
        if (!row.error.empty() && row.error.back() == '\n') row.error.pop_back();
        return row;
    }
    config->input.map = join_relative(base, config->input.map);
    config->input.scen = join_relative(base, config->input.scen);
    config->input.graph = join_relative(base, config->input.graph);
    try {
        for (bool trdp : {true, false}) {
            RunConfig c = *config;
            c.solver.trdp = trdp;
            std::vector<Sample> samples;
            for (int r = 0; r < repeat; ++r) samples.push_back(measure(c));
            (trdp ? row.on : row.off) = summarize(samples);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

unsigned worker_count(std::size_t rows) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("TRDP_WORKERS")) {
        try {
            n = std::max(1, std::stoi(cap));
        } catch (const std::exception&) {
        }
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(rows, 1)));
}

int run_bench(const std::string& suite_path, int repeat, const std::string& format, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = read_file(suite_path);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInput;
    }
    std::filesystem::path base = std::filesystem::path(suite_path).parent_path();
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back(line);
    }

    std::vector<BenchRow> rows(lines.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < worker_count(lines.size()); ++w)
        workers.emplace_back([&] {
            for (std::size_t i; (i = next++) < lines.size();) rows[i] = bench_row(lines[i], base, repeat);
        });
    for (auto& t : workers) t.join();

    if (format == "json") {
        Json j;
        j["schema"] = 1;
        j["suite"] = suite_path;
        j["repeat"] = repeat;
        Json arr = Json::array();
        for (const BenchRow& r : rows) {
            Json row;
            row["label"] = r.label;
            if (!r.error.empty()) {
                row["error"] = r.error;
                arr.push_back(row);
                continue;
            }
            for (const auto& [name, s] : {std::pair{"trdp_on", &r.on}, std::pair{"trdp_off", &r.off}}) {
                Json col;
                col["outcome"] = s->last.outcome;
                col["cost"] = s->last.cost;
                col["ct_generated"] = s->last.ct_generated;
                col["trd_conflicts"] = s->last.trd_conflicts;
                col["bypasses"] = s->last.bypasses;
                col["total_time_mean"] = s->total_mean;
                col["total_time_sd"] = s->total_sd;
                col["trd_check_time_mean"] = s->trd_mean;
                col["trd_check_time_sd"] = s->trd_sd;
                row[name] = col;
            }
            arr.push_back(row);
        }
        j["rows"] = arr;
        out << j.dump(2) << "\n";
        return 0;
    }

    out << std::left << std::setw(18) << "instance" << std::setw(17) << "on:outcome" << std::setw(8) << "cost" << std::setw(11)
        << "ct" << std::setw(6) << "trds" << std::setw(22) << "time(s)" << std::setw(22) << "trd_check(s)" << std::setw(17)
        << "off:outcome" << std::setw(8) << "cost" << std::setw(11) << "ct" << "time(s)\n";
    auto pm = [](double mean, double sd) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << mean << "+-" << sd;
        return s.str();
    };
    for (const BenchRow& r : rows) {
        out << std::left << std::setw(18) << r.label;
        if (!r.error.empty()) {
            out << "error: " << r.error << "\n";
            continue;
        }
        out << std::setw(17) << r.on.last.outcome << std::setw(8) << r.on.last.cost << std::setw(11) << r.on.last.ct_generated
            << std::setw(6) << r.on.last.trd_conflicts << std::setw(22) << pm(r.on.total_mean, r.on.total_sd) << std::setw(22)
            << pm(r.on.trd_mean, r.on.trd_sd) << std::setw(17) << r.off.last.outcome << std::setw(8) << r.off.last.cost
            << std::setw(11) << r.off.last.ct_generated << pm(r.off.total_mean, r.off.total_sd) << "\n";
    }
    return 0;
}

}  // namespace

Instance load_instance(const InputSpec& spec) {
    bool has_map = !spec.map.empty(), has_scen = !spec.scen.empty(), has_graph = !spec.graph.empty();
    if (has_graph && (has_map || has_scen)) throw UsageError("--graph cannot be combined with --map/--scen");
    if (has_scen && !has_map) throw UsageError("--scen requires --map");
    if (has_map && !has_scen) throw UsageError("--map requires --scen");
    if (!has_graph && !has_map) throw UsageError("an instance is required: --graph, or --map with --scen");
    Instance inst;
    if (has_graph) {
        inst = load_graph_file(read_file(spec.graph));
        if (spec.agents > 0) {
            if (static_cast<std::size_t>(spec.agents) > inst.agent_count())
                throw UsageError("graph file has " + std::to_string(inst.agent_count()) + " agents, " + std::to_string(spec.agents) + " requested");
            inst.starts.resize(spec.agents);
            inst.goals.resize(spec.agents);
        }
        if (spec.radius) inst.radius = *spec.radius;
        if (inst.name.empty()) inst.name = std::filesystem::path(spec.graph).stem().string();
    } else {
        Grid grid = load_movingai_map(read_file(spec.map));
        GridGraph gg = grid_to_graph(grid, spec.neighbors, spec.resolution);
        std::string scen = read_file(spec.scen);
        int agents = spec.agents;
        if (agents == 0) {
            std::istringstream in(scen);
            for (std::string line; std::getline(in, line);)
                if (line.find_first_not_of(" \t\r") != std::string::npos && line.rfind("version", 0) != 0) ++agents;
        }
        AgentEndpoints ends = load_scen(scen, agents, gg);
        inst.graph = std::move(gg.graph);
        inst.starts = std::move(ends.starts);
        inst.goals = std::move(ends.goals);
        inst.radius = spec.radius.value_or(Rational(1, 4));
        inst.neighborhood = spec.neighbors;
        inst.resolution = spec.resolution;
        inst.name = std::filesystem::path(spec.map).stem().string();
    }
    return inst;
}

int exit_code(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Solved: return kExitSolved;
        case OutcomeKind::Unsolvable: return kExitUnsolvable;
        case OutcomeKind::LimitExhausted: return kExitLimit;
    }
    return kExitInput;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<Problem> problem;
    try {
        problem.emplace(load_instance(config.input));
    } catch (const std::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    Json report;
    OutcomeKind kind;
    if (config.engine == "oracle") {
        OracleOutcome o = joint_astar(*problem, config.solver.objective, config.solver.ct_node_limit);
        report = report_json(config, *problem, nullptr, &o);
        kind = o.kind;
    } else {
        Outcome o = solve(*problem, config.solver);
        report = report_json(config, *problem, &o, nullptr);
        kind = o.kind;
    }
    if (config.out == "json")
        out << report.dump(2) << "\n";
    else
        report_text(out, report);
    return exit_code(kind);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && args.front() == "bench") {
        CLI::App app{"bench"};
        std::string suite, format = "text";
        int repeat = 1;
        app.add_option("suite", suite, "suite file")->required();
        app.add_option("--repeat", repeat, "runs per configuration")->check(CLI::PositiveNumber);
        app.add_option("--out", format, "json or text")->check(CLI::IsMember({"json", "text"}));
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            err << e.what() << "\n";
            return kExitInput;
        }
        return run_bench(suite, repeat, format, out, err);
    }
    if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
        out << "usage: cbstrdp [--graph FILE | --map FILE --scen FILE] [options]\n"
               "       cbstrdp bench SUITE [--repeat N] [--out json|text]\n"
               "options: --agents N --neighbors 4|8|16|32 --radius Q --resolution R\n"
               "         --objective flowtime|makespan --trdp on|off --bypass on|off\n"
               "         --solver cbs|oracle --time-limit S --node-limit M --out json|text --no-timing\n"
               "exit: 0 solved, 1 unsolvable, 2 limit exhausted, 3 input error\n";
        return 0;
    }
    auto config = parse_run(args, err);
    if (!config) return kExitInput;
    return run(*config, out, err);
}

}  // namespace trdp
