#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "lra/problem.hpp"

namespace lra {

struct FiniteHorizon {
    std::size_t T;
};
struct Discounted {
    double alpha;
};
struct LimitValue {};
using HorizonTag = std::variant<FiniteHorizon, Discounted, LimitValue>;

/// State-indexed value: V_T, h_alpha, a limit value V, or a candidate function w.
struct ValueFunction {
    std::vector<double> values;
    HorizonTag horizon = LimitValue{};

    double operator[](StateIndex s) const { return values.at(s); }
    std::size_t size() const noexcept { return values.size(); }
};

/// y(0..S) and u(0..S-1); controls.size() is the number of steps.
struct Trajectory {
    std::vector<StateIndex> states;
    std::vector<ActionIndex> controls;

    std::size_t steps() const noexcept { return controls.size(); }
};

/// A prefix driving y0 onto a cycle, followed by the cycle itself. The cycle's
/// last state equals its first; the prefix ends where the cycle starts.
struct PeriodicProcess {
    Trajectory prefix;
    Trajectory cycle;
    std::size_t period = 0;

    StateIndex start() const { return prefix.states.front(); }
    /// Prefix followed by `laps` repetitions of the cycle.
    Trajectory unroll(std::size_t laps) const;
};

/// V_T together with the argmin actions: policy[h - 1][y] is optimal with h steps to go.
struct CesaroSolution {
    ValueFunction value;
    std::vector<std::vector<ActionIndex>> policy;
};

/// Finite-horizon averaged value V_T via T V_T(y) = min_u { k(y,u) + (T-1) V_{T-1}(f(y,u)) }.
ValueFunction value_iteration_avg(const Graph& graph, std::size_t T);
CesaroSolution value_iteration_avg_with_policy(const Graph& graph, std::size_t T);

/// Fixed point of h(y) = min_u { (1-alpha) k(y,u) + alpha h(f(y,u)) } to sup-norm accuracy `tol`.
ValueFunction value_iteration_discounted(const Graph& graph, double alpha, double tol = 1e-10);

/// Greedy (lowest index on ties) stationary policy for a discounted value.
std::vector<ActionIndex> discounted_greedy_policy(const Graph& graph, const ValueFunction& h);

/// Policy evaluated at (state, time).
using Policy = std::function<ActionIndex(StateIndex state, std::size_t t)>;

/// Time-varying argmin policy of a horizon-T solution, valid for t < T.
Policy cesaro_policy(const CesaroSolution& solution);

/// Runs the system for `steps` steps. Throws InadmissibleAction if the policy
/// proposes an action outside A(y).
Trajectory rollout(const Graph& graph, StateIndex y0, const Policy& policy, std::size_t steps);
Trajectory rollout(const Graph& graph, StateIndex y0, std::span<const ActionIndex> feedback,
                   std::size_t steps);

/// (1/S) sum_{t<S} k(y(t), u(t)) over all recorded steps.
double average_cost(const Graph& graph, const Trajectory& trajectory);

/// Throws InadmissibleAction / std::invalid_argument if `trajectory` does not obey the dynamics.
void validate(const Graph& graph, const Trajectory& trajectory);

/// Pair indices (y(t), u(t)) of a valid trajectory.
std::vector<PairIndex> pair_sequence(const Graph& graph, const Trajectory& trajectory);

} // namespace lra
