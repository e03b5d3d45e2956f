#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lra/errors.hpp"

namespace lra {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;
using PairIndex = std::size_t;
using Point = std::vector<double>;

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// A discrete-time controlled system y(t+1) = f(y(t), u(t)) on a finite grid
/// of states with a finite action set. A (state, action) combination without
/// a transition is inadmissible.
class ControlProblem {
public:
    ControlProblem(std::string name, std::vector<Point> states,
                   std::vector<std::string> actions);

    /// Makes (state, action) admissible with the given successor and cost.
    void set_transition(StateIndex state, ActionIndex action, StateIndex next, double cost);
    void clear_transition(StateIndex state, ActionIndex action);

    bool admissible(StateIndex state, ActionIndex action) const;
    std::optional<StateIndex> next(StateIndex state, ActionIndex action) const;
    /// Cost of an admissible pair; throws InadmissibleAction otherwise.
    double cost(StateIndex state, ActionIndex action) const;

    const std::string& name() const noexcept { return name_; }
    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }
    std::size_t dimension() const noexcept { return states_.front().size(); }
    const Point& state(StateIndex s) const { return states_.at(s); }
    const std::vector<Point>& states() const noexcept { return states_; }
    const std::vector<std::string>& actions() const noexcept { return actions_; }

private:
    std::size_t slot(StateIndex state, ActionIndex action) const;

    std::string name_;
    std::vector<Point> states_;
    std::vector<std::string> actions_;
    std::vector<std::size_t> next_; // npos marks an inadmissible pair
    std::vector<double> cost_;
};

/// One element of the admissible set G.
struct StatePair {
    StateIndex state;
    ActionIndex action;
    StateIndex next;
    double cost;
};

/// Sup-norm bound M of the running cost over G.
struct CostBound {
    double M = 0.0;
};

/// The admissible graph G of a viable control problem. Pairs are ordered
/// lexicographically by (state, action); every measure vector in the library
/// is indexed by this ordering. Immutable after construction.
class Graph {
public:
    const ControlProblem& problem() const noexcept { return problem_; }
    std::size_t num_states() const noexcept { return problem_.num_states(); }
    std::size_t num_pairs() const noexcept { return pairs_.size(); }

    std::span<const StatePair> pairs() const noexcept { return pairs_; }
    const StatePair& pair(PairIndex p) const { return pairs_.at(p); }
    /// Admissible pairs leaving `state`, in action order.
    std::span<const PairIndex> out_pairs(StateIndex state) const;
    /// Index of (state, action) in G, or npos when inadmissible.
    PairIndex pair_index(StateIndex state, ActionIndex action) const;

    CostBound cost_bound() const noexcept { return bound_; }

    bool reaches(StateIndex from, StateIndex to) const;
    /// States reachable from `from` in zero or more steps, ascending.
    std::vector<StateIndex> reachable_from(StateIndex from) const;

private:
    friend Graph build_graph(const ControlProblem& problem);
    explicit Graph(ControlProblem problem) : problem_(std::move(problem)) {}

    ControlProblem problem_;
    std::vector<StatePair> pairs_;
    std::vector<std::size_t> out_offsets_;
    std::vector<PairIndex> out_;
    std::vector<PairIndex> pair_lookup_;
    std::vector<char> reach_; // num_states x num_states
    CostBound bound_;
};

/// Builds G and the cost bound. Throws ViabilityViolation if some state has
/// no admissible action.
Graph build_graph(const ControlProblem& problem);

/// Point-valued dynamics y -> f(y, u) used before grid snapping.
using Dynamics = std::function<Point(std::span<const double> y, ActionIndex u)>;
using RunningCost = std::function<double(std::span<const double> y, ActionIndex u)>;

/// Evaluates f at every (grid point, action). Images outside the bounding box
/// of the grid are inadmissible (npos); the rest snap to the nearest grid
/// point, ties going to the lower index. Result is indexed state * actions + action.
std::vector<std::size_t> snap_dynamics(const Dynamics& f, std::span<const Point> grid,
                                       std::size_t num_actions);

/// Convenience builder: snaps `f` onto `grid` and evaluates `k` at grid points.
ControlProblem discretize(std::string name, std::vector<Point> grid,
                          std::vector<std::string> actions, const Dynamics& f,
                          const RunningCost& k);

} // namespace lra
