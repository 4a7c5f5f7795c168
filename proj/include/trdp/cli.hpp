#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trdp/cbs.hpp"
#include "trdp/oracle.hpp"

namespace trdp {

/// Where an instance comes from: a MovingAI map plus scenario, or a native graph file.
struct InputSpec {
    std::string map;
    std::string scen;
    std::string graph;
    int agents = 0;  // 0 = every scenario entry (map) or the file's agents (graph)
    int neighbors = 4;
    std::optional<Rational> radius;  // default: 1/4 for maps, the file's value for graphs
    std::int64_t resolution = 100;
};

/// Reads and validates the described instance. Throws UsageError, ParseError
/// or std::runtime_error (unreadable file).
Instance load_instance(const InputSpec& spec);

struct RunConfig {
    InputSpec input;
    SolverConfig solver;
    std::string engine = "cbs";  // cbs | oracle
    std::string out = "json";    // json | text
    bool timing = true;          // include wall-clock fields in the report
};

/// Exit codes of a single run.
enum ExitCode { kExitSolved = 0, kExitUnsolvable = 1, kExitLimit = 2, kExitInput = 3 };

int exit_code(OutcomeKind kind);

/// Runs the solver selected by `config` and writes the report. Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Entry point of the command-line tool: a single run, or `bench SUITE`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trdp
