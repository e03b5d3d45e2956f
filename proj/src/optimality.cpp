#include "lra/optimality.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lra {

std::vector<StepResidual> condition_residuals(const Graph& graph, const Trajectory& trajectory,
                                              const DualCertificate& cert, double value_y0,
                                              StateIndex y0) {
    validate(graph, trajectory);
    if (trajectory.states.front() != y0)
        throw std::invalid_argument("process does not start at y0");
    const auto& psi = cert.psi;
    const auto& eta = cert.eta;
    std::vector<StepResidual> out;
    for (std::size_t t = 0; t < trajectory.steps(); ++t) {
        const auto y = trajectory.states[t];
        const auto f = trajectory.states[t + 1];
        const double k = graph.problem().cost(y, trajectory.controls[t]);
        out.push_back({t, k - psi[y] + eta[f] - eta[y] - (value_y0 - psi[y0]), psi[y] - psi[y0],
                       false});
    }
    return out;
}

bool check_sufficient(const Graph& graph, const Trajectory& trajectory,
                      const DualCertificate& cert, const ValueFunction& V, StateIndex y0,
                      double tol) {
    const double slack = certificate_slack(graph, cert, y0);
    if (slack < -tol)
        throw InfeasibleCertificate("certificate violated by " + std::to_string(-slack));
    for (const auto& r : condition_residuals(graph, trajectory, cert, V[y0], y0))
        if (std::abs(r.value) > tol || std::abs(r.level) > tol)
            return false;
    return true;
}

NecessityReport check_necessary_periodic(const Graph& graph, const PeriodicProcess& process,
                                         const DualCertificate& cert, const ValueFunction& V,
                                         StateIndex y0, double tol) {
    const auto& cyc = process.cycle;
    if (cyc.steps() == 0 || cyc.states.size() != cyc.steps() + 1 ||
        cyc.states.front() != cyc.states.back() || cyc.steps() != process.period)
        throw NotPeriodic("cycle does not close after its period");
    if (process.prefix.states.empty() || process.prefix.states.back() != cyc.states.front())
        throw NotPeriodic("prefix does not end where the cycle starts");

    NecessityReport report;
    report.value = V[y0];
    report.mean_cycle_cost = average_cost(graph, cyc);
    report.optimal = std::abs(report.mean_cycle_cost - report.value) <= tol;

    const auto prefix_len = process.prefix.steps();
    report.steps = condition_residuals(graph, process.unroll(1), cert, report.value, y0);
    bool hold = true;
    for (auto& r : report.steps) {
        r.on_cycle = r.t >= prefix_len;
        if (std::abs(r.level) > tol || (r.on_cycle && std::abs(r.value) > tol))
            hold = false;
    }
    report.conditions_hold = report.optimal && hold;
    report.inconsistency = report.optimal && !hold;
    return report;
}

std::vector<ActionIndex> extract_feedback(const Graph& graph, const std::vector<double>& eta) {
    if (eta.size() != graph.num_states())
        throw std::invalid_argument("eta must be defined on every state");
    std::vector<ActionIndex> u(graph.num_states(), 0);
    for (StateIndex s = 0; s < graph.num_states(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (auto p : graph.out_pairs(s)) {
            const auto& pr = graph.pair(p);
            const double v = pr.cost + eta[pr.next];
            if (v < best) {
                best = v;
                u[s] = pr.action;
            }
        }
    }
    return u;
}

double cost_gap_identity(const Graph& graph, const Trajectory& trajectory,
                         const std::vector<double>& eta, const ValueFunction& V, StateIndex y0,
                         std::size_t T) {
    if (T == 0 || T > trajectory.steps())
        throw std::invalid_argument("horizon must lie in 1..steps");
    if (trajectory.states.front() != y0)
        throw std::invalid_argument("process does not start at y0");
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t)
        sum += graph.problem().cost(trajectory.states[t], trajectory.controls[t]);
    const double inv = 1.0 / static_cast<double>(T);
    return std::abs(inv * (eta[trajectory.states[T]] - eta[y0]) - (V[y0] - inv * sum));
}

} // namespace lra
