#pragma once

#include <filesystem>
#include <json.hpp>

#include "lra/dp.hpp"
#include "lra/idlp.hpp"
#include "lra/occupation.hpp"
#include "lra/optimality.hpp"
#include "lra/problem.hpp"

namespace lra {

using Json = nlohmann::json;

/// Parses the problem document:
///   { "name": str, "states": [[x...]...], "actions": [str...],
///     "transitions": [[s, a, next]...], "costs": [[s, a, value]...] }
/// Every transition needs exactly one cost and vice versa. Throws SchemaError.
ControlProblem problem_from_json(const Json& doc);
ControlProblem read_problem(const std::filesystem::path& path);
Json problem_to_json(const ControlProblem& problem);

/// {"<pair index>": weight} with zero weights omitted.
Json measure_to_json(std::span<const double> weights);
Json certificate_to_json(const DualCertificate& cert);
Json stats_to_json(const SolverStats& stats);
Json trajectory_to_json(const Trajectory& trajectory);
Json process_to_json(const PeriodicProcess& process);
Json necessity_to_json(const NecessityReport& report);

} // namespace lra
