#include "lra/json_io.hpp"

#include <fstream>
#include <set>
#include <utility>

namespace lra {

namespace {

template <class T>
T field(const Json& doc, const char* key) {
    if (!doc.contains(key))
        throw SchemaError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("field '") + key + "' has the wrong type: " + e.what());
    }
}

std::size_t index_at(const Json& entry, std::size_t i, const char* what) {
    const auto& v = entry.at(i);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw SchemaError(std::string(what) + " entries must start with nonnegative integers");
    return v.get<std::size_t>();
}

} // namespace

ControlProblem problem_from_json(const Json& doc) {
    if (!doc.is_object())
        throw SchemaError("problem document must be a JSON object");
    const auto name = doc.contains("name") ? field<std::string>(doc, "name") : std::string{};
    const auto states = field<std::vector<Point>>(doc, "states");
    const auto actions = field<std::vector<std::string>>(doc, "actions");
    const auto transitions = field<Json>(doc, "transitions");
    const auto costs = field<Json>(doc, "costs");
    if (!transitions.is_array() || !costs.is_array())
        throw SchemaError("'transitions' and 'costs' must be arrays");

    ControlProblem problem(name, states, actions);
    std::vector<std::size_t> next(states.size() * actions.size(), npos);
    for (const auto& t : transitions) {
        if (!t.is_array() || t.size() != 3)
            throw SchemaError("transition entries must be [state, action, next]");
        const auto s = index_at(t, 0, "transition"), a = index_at(t, 1, "transition");
        const auto n = index_at(t, 2, "transition");
        if (s >= states.size() || a >= actions.size() || n >= states.size())
            throw SchemaError("transition index out of range");
        if (next[s * actions.size() + a] != npos)
            throw SchemaError("duplicate transition for state " + std::to_string(s) +
                              ", action " + std::to_string(a));
        next[s * actions.size() + a] = n;
    }
    std::set<std::pair<std::size_t, std::size_t>> priced;
    for (const auto& c : costs) {
        if (!c.is_array() || c.size() != 3 || !c.at(2).is_number())
            throw SchemaError("cost entries must be [state, action, value]");
        const auto s = index_at(c, 0, "cost"), a = index_at(c, 1, "cost");
        if (s >= states.size() || a >= actions.size())
            throw SchemaError("cost index out of range");
        if (next[s * actions.size() + a] == npos)
            throw SchemaError("cost given for inadmissible pair (" + std::to_string(s) + ", " +
                              std::to_string(a) + ")");
        if (!priced.emplace(s, a).second)
            throw SchemaError("duplicate cost for state " + std::to_string(s) + ", action " +
                              std::to_string(a));
        problem.set_transition(s, a, next[s * actions.size() + a], c.at(2).get<double>());
    }
    for (std::size_t i = 0; i < next.size(); ++i)
        if (next[i] != npos && !priced.count({i / actions.size(), i % actions.size()}))
            throw SchemaError("transition without cost at state " +
                              std::to_string(i / actions.size()) + ", action " +
                              std::to_string(i % actions.size()));
    return problem;
}

ControlProblem read_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open problem file " + path.string());
    Json doc;
    try {
        in >> doc;
    } catch (const Json::parse_error& e) {
        throw SchemaError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return problem_from_json(doc);
}

Json problem_to_json(const ControlProblem& problem) {
    Json transitions = Json::array(), costs = Json::array();
    for (StateIndex s = 0; s < problem.num_states(); ++s)
        for (ActionIndex a = 0; a < problem.num_actions(); ++a)
            if (auto n = problem.next(s, a)) {
                transitions.push_back({s, a, *n});
                costs.push_back({s, a, problem.cost(s, a)});
            }
    return Json{{"name", problem.name()},
                {"states", problem.states()},
                {"actions", problem.actions()},
                {"transitions", transitions},
                {"costs", costs}};
}

Json measure_to_json(std::span<const double> weights) {
    Json out = Json::object();
    for (std::size_t p = 0; p < weights.size(); ++p)
        if (weights[p] != 0.0)
            out[std::to_string(p)] = weights[p];
    return out;
}

Json certificate_to_json(const DualCertificate& cert) {
    return Json{{"mu", cert.mu}, {"psi", cert.psi}, {"eta", cert.eta}};
}

Json stats_to_json(const SolverStats& stats) {
    return Json{{"rows", stats.rows},
                {"cols", stats.cols},
                {"iterations", stats.iterations},
                {"bland_used", stats.bland_used},
                {"kkt_residual", stats.kkt_residual}};
}

Json trajectory_to_json(const Trajectory& trajectory) {
    return Json{{"states", trajectory.states}, {"controls", trajectory.controls}};
}

Json process_to_json(const PeriodicProcess& process) {
    return Json{{"prefix", trajectory_to_json(process.prefix)},
                {"cycle", trajectory_to_json(process.cycle)},
                {"period", process.period}};
}

Json necessity_to_json(const NecessityReport& report) {
    Json steps = Json::array();
    for (const auto& r : report.steps)
        steps.push_back(
            {{"t", r.t}, {"value_residual", r.value}, {"level_residual", r.level},
             {"on_cycle", r.on_cycle}});
    return Json{{"mean_cycle_cost", report.mean_cycle_cost},
                {"value", report.value},
                {"optimal", report.optimal},
                {"conditions_hold", report.conditions_hold},
                {"inconsistency", report.inconsistency},
                {"steps", steps}};
}

} // namespace lra
