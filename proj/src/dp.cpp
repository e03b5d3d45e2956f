#include "lra/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lra {

Trajectory PeriodicProcess::unroll(std::size_t laps) const {
    Trajectory out = prefix;
    for (std::size_t lap = 0; lap < laps; ++lap) {
        out.controls.insert(out.controls.end(), cycle.controls.begin(), cycle.controls.end());
        out.states.insert(out.states.end(), cycle.states.begin() + 1, cycle.states.end());
    }
    return out;
}

namespace {

// One Bellman sweep of the undiscounted total cost; lowest action wins ties.
void total_cost_step(const Graph& graph, std::span<const double> prev, std::span<double> next,
                     std::vector<ActionIndex>* argmin) {
    for (StateIndex s = 0; s < graph.num_states(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        ActionIndex arg = 0;
        for (auto p : graph.out_pairs(s)) {
            const auto& pr = graph.pair(p);
            const double v = pr.cost + prev[pr.next];
            if (v < best) {
                best = v;
                arg = pr.action;
            }
        }
        next[s] = best;
        if (argmin)
            (*argmin)[s] = arg;
    }
}

CesaroSolution cesaro(const Graph& graph, std::size_t T, bool keep_policy) {
    if (T == 0)
        throw std::invalid_argument("horizon T must be positive");
    const auto n = graph.num_states();
    // Totals T V_T are iterated directly so the recursion never divides.
    std::vector<double> prev(n, 0.0), next(n, 0.0);
    CesaroSolution out;
    std::vector<ActionIndex> argmin(n, 0);
    if (keep_policy)
        out.policy.reserve(T);
    for (std::size_t h = 1; h <= T; ++h) {
        total_cost_step(graph, prev, next, keep_policy ? &argmin : nullptr);
        if (keep_policy)
            out.policy.push_back(argmin);
        std::swap(prev, next);
    }
    for (auto& v : prev)
        v /= static_cast<double>(T);
    out.value = {std::move(prev), FiniteHorizon{T}};
    return out;
}

} // namespace

ValueFunction value_iteration_avg(const Graph& graph, std::size_t T) {
    return cesaro(graph, T, false).value;
}

CesaroSolution value_iteration_avg_with_policy(const Graph& graph, std::size_t T) {
    return cesaro(graph, T, true);
}

ValueFunction value_iteration_discounted(const Graph& graph, double alpha, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    if (!(tol > 0.0))
        throw std::invalid_argument("tolerance must be positive");
    const auto n = graph.num_states();
    std::vector<double> h(n, 0.0), next(n, 0.0);
    // Stop once the step is below tol (1 - alpha); the contraction bound then
    // keeps the distance to the fixed point below tol.
    const double stop = tol * (1.0 - alpha);
    for (;;) {
        double change = 0.0;
        for (StateIndex s = 0; s < n; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (auto p : graph.out_pairs(s)) {
                const auto& pr = graph.pair(p);
                best = std::min(best, (1.0 - alpha) * pr.cost + alpha * h[pr.next]);
            }
            next[s] = best;
            change = std::max(change, std::abs(best - h[s]));
        }
        std::swap(h, next);
        if (change <= stop)
            break;
    }
    return {std::move(h), Discounted{alpha}};
}

std::vector<ActionIndex> discounted_greedy_policy(const Graph& graph, const ValueFunction& h) {
    const auto* tag = std::get_if<Discounted>(&h.horizon);
    if (!tag)
        throw std::invalid_argument("value function is not a discounted value");
    const double alpha = tag->alpha;
    std::vector<ActionIndex> policy(graph.num_states(), 0);
    for (StateIndex s = 0; s < graph.num_states(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (auto p : graph.out_pairs(s)) {
            const auto& pr = graph.pair(p);
            const double v = (1.0 - alpha) * pr.cost + alpha * h[pr.next];
            if (v < best) {
                best = v;
                policy[s] = pr.action;
            }
        }
    }
    return policy;
}

Policy cesaro_policy(const CesaroSolution& solution) {
    const auto T = solution.policy.size();
    if (T == 0)
        throw std::invalid_argument("solution carries no policy");
    return [policy = solution.policy, T](StateIndex s, std::size_t t) {
        if (t >= T)
            throw std::out_of_range("time beyond the policy horizon");
        return policy[T - t - 1][s];
    };
}

Trajectory rollout(const Graph& graph, StateIndex y0, const Policy& policy, std::size_t steps) {
    if (y0 >= graph.num_states())
        throw std::out_of_range("initial state out of range");
    Trajectory out;
    out.states.reserve(steps + 1);
    out.controls.reserve(steps);
    out.states.push_back(y0);
    StateIndex y = y0;
    for (std::size_t t = 0; t < steps; ++t) {
        const ActionIndex u = policy(y, t);
        const auto p = graph.pair_index(y, u);
        if (p == npos)
            throw InadmissibleAction(y, u);
        y = graph.pair(p).next;
        out.controls.push_back(u);
        out.states.push_back(y);
    }
    return out;
}

Trajectory rollout(const Graph& graph, StateIndex y0, std::span<const ActionIndex> feedback,
                   std::size_t steps) {
    if (feedback.size() != graph.num_states())
        throw std::invalid_argument("feedback table must cover every state");
    return rollout(
        graph, y0, [feedback](StateIndex s, std::size_t) { return feedback[s]; }, steps);
}

void validate(const Graph& graph, const Trajectory& trajectory) {
    if (trajectory.states.size() != trajectory.controls.size() + 1)
        throw std::invalid_argument("trajectory needs exactly one more state than controls");
    for (std::size_t t = 0; t < trajectory.controls.size(); ++t) {
        const auto p = graph.pair_index(trajectory.states[t], trajectory.controls[t]);
        if (p == npos)
            throw InadmissibleAction(trajectory.states[t], trajectory.controls[t]);
        if (graph.pair(p).next != trajectory.states[t + 1])
            throw std::invalid_argument("trajectory does not follow the dynamics at t = " +
                                        std::to_string(t));
    }
}

std::vector<PairIndex> pair_sequence(const Graph& graph, const Trajectory& trajectory) {
    validate(graph, trajectory);
    std::vector<PairIndex> out;
    out.reserve(trajectory.steps());
    for (std::size_t t = 0; t < trajectory.steps(); ++t)
        out.push_back(graph.pair_index(trajectory.states[t], trajectory.controls[t]));
    return out;
}

double average_cost(const Graph& graph, const Trajectory& trajectory) {
    const auto pairs = pair_sequence(graph, trajectory);
    if (pairs.empty())
        throw std::invalid_argument("average cost of an empty trajectory");
    double sum = 0.0;
    for (auto p : pairs)
        sum += graph.pair(p).cost;
    return sum / static_cast<double>(pairs.size());
}

} // namespace lra
