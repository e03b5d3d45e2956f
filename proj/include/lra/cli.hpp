#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lra/json_io.hpp"
#include "lra/problem.hpp"

namespace lra::cli {

/// Built-in name (toy, threestate, constant, random) or path to a problem file.
struct ProblemSource {
    std::string name;
    std::size_t points = 21;
    std::size_t states = 8;
    std::size_t actions = 3;
    std::uint64_t seed = 1;
    double cost = 1.0;
};

/// Throws SchemaError for unknown files or malformed documents.
ControlProblem load_problem(const ProblemSource& source);

/// Resolves --y0 / --at to a state index; exactly one coordinate match is required.
StateIndex resolve_start(const ControlProblem& problem, std::optional<std::size_t> index,
                         const std::vector<double>& at);

struct SolveRequest {
    std::vector<std::size_t> horizons{10, 100, 1000};
    std::vector<double> alphas{0.9, 0.99};
};

/// Full solve of one start state as a JSON document.
Json solve_report(const Graph& graph, StateIndex y0, const SolveRequest& request);

enum class SweepKind { horizon, discount, perturbation };

struct SweepRow {
    std::string param_name;
    double param = 0.0;
    double value = 0.0;
    double gap_to_dstar = 0.0;
    double rho_to_W = 0.0;
};

/// One row per parameter value, in the given order. Points run concurrently.
std::vector<SweepRow> sweep(const Graph& graph, StateIndex y0, SweepKind kind,
                            const std::vector<double>& params);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Invariant suite for one start state.
std::vector<CheckResult> verify(const Graph& graph, StateIndex y0);

/// Entry point; returns 0 on success, 1 on a failed invariant or viability
/// violation, 2 on usage or schema errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace lra::cli
