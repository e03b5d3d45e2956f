#include "lra/problem.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lra {

ControlProblem::ControlProblem(std::string name, std::vector<Point> states,
                               std::vector<std::string> actions)
    : name_(std::move(name)), states_(std::move(states)), actions_(std::move(actions)) {
    if (states_.empty())
        throw SchemaError("problem has no states");
    if (actions_.empty())
        throw SchemaError("problem has no actions");
    const std::size_t dim = states_.front().size();
    if (dim == 0)
        throw SchemaError("states must have at least one coordinate");
    for (const auto& p : states_) {
        if (p.size() != dim)
            throw SchemaError("all states must have the same dimension");
        for (double x : p)
            if (!std::isfinite(x))
                throw SchemaError("state coordinates must be finite");
    }
    next_.assign(states_.size() * actions_.size(), npos);
    cost_.assign(states_.size() * actions_.size(), std::numeric_limits<double>::quiet_NaN());
}

std::size_t ControlProblem::slot(StateIndex state, ActionIndex action) const {
    if (state >= states_.size())
        throw SchemaError("state index " + std::to_string(state) + " out of range");
    if (action >= actions_.size())
        throw SchemaError("action index " + std::to_string(action) + " out of range");
    return state * actions_.size() + action;
}

void ControlProblem::set_transition(StateIndex state, ActionIndex action, StateIndex next,
                                    double cost) {
    const auto i = slot(state, action);
    if (next >= states_.size())
        throw SchemaError("successor index " + std::to_string(next) + " out of range");
    if (!std::isfinite(cost))
        throw SchemaError("cost must be finite");
    next_[i] = next;
    cost_[i] = cost;
}

void ControlProblem::clear_transition(StateIndex state, ActionIndex action) {
    const auto i = slot(state, action);
    next_[i] = npos;
    cost_[i] = std::numeric_limits<double>::quiet_NaN();
}

bool ControlProblem::admissible(StateIndex state, ActionIndex action) const {
    return next_[slot(state, action)] != npos;
}

std::optional<StateIndex> ControlProblem::next(StateIndex state, ActionIndex action) const {
    const auto n = next_[slot(state, action)];
    if (n == npos)
        return std::nullopt;
    return n;
}

double ControlProblem::cost(StateIndex state, ActionIndex action) const {
    const auto i = slot(state, action);
    if (next_[i] == npos)
        throw InadmissibleAction(state, action);
    return cost_[i];
}

std::span<const PairIndex> Graph::out_pairs(StateIndex state) const {
    if (state >= num_states())
        throw std::out_of_range("state index out of range");
    return std::span<const PairIndex>(out_).subspan(out_offsets_[state],
                                                    out_offsets_[state + 1] - out_offsets_[state]);
}

PairIndex Graph::pair_index(StateIndex state, ActionIndex action) const {
    if (state >= num_states() || action >= problem_.num_actions())
        return npos;
    return pair_lookup_[state * problem_.num_actions() + action];
}

bool Graph::reaches(StateIndex from, StateIndex to) const {
    const auto n = num_states();
    if (from >= n || to >= n)
        throw std::out_of_range("state index out of range");
    return reach_[from * n + to] != 0;
}

std::vector<StateIndex> Graph::reachable_from(StateIndex from) const {
    const auto n = num_states();
    if (from >= n)
        throw std::out_of_range("state index out of range");
    std::vector<StateIndex> out;
    for (StateIndex z = 0; z < n; ++z)
        if (reach_[from * n + z])
            out.push_back(z);
    return out;
}

Graph build_graph(const ControlProblem& problem) {
    Graph g(problem);
    const auto n = problem.num_states();
    const auto na = problem.num_actions();
    g.pair_lookup_.assign(n * na, npos);
    g.out_offsets_.assign(n + 1, 0);
    for (StateIndex s = 0; s < n; ++s) {
        for (ActionIndex a = 0; a < na; ++a) {
            if (auto next = problem.next(s, a)) {
                g.pair_lookup_[s * na + a] = g.pairs_.size();
                g.out_.push_back(g.pairs_.size());
                g.pairs_.push_back({s, a, *next, problem.cost(s, a)});
            }
        }
        g.out_offsets_[s + 1] = g.out_.size();
        if (g.out_offsets_[s + 1] == g.out_offsets_[s])
            throw ViabilityViolation(s);
    }
    for (const auto& p : g.pairs_)
        g.bound_.M = std::max(g.bound_.M, std::abs(p.cost));

    g.reach_.assign(n * n, 0);
    std::deque<StateIndex> queue;
    for (StateIndex src = 0; src < n; ++src) {
        char* row = g.reach_.data() + src * n;
        row[src] = 1;
        queue.assign(1, src);
        while (!queue.empty()) {
            const auto s = queue.front();
            queue.pop_front();
            for (auto p : g.out_pairs(s)) {
                const auto z = g.pairs_[p].next;
                if (!row[z]) {
                    row[z] = 1;
                    queue.push_back(z);
                }
            }
        }
    }
    return g;
}

std::vector<std::size_t> snap_dynamics(const Dynamics& f, std::span<const Point> grid,
                                       std::size_t num_actions) {
    if (grid.empty())
        throw SchemaError("grid must be nonempty");
    const std::size_t dim = grid.front().size();
    Point lo(grid.front()), hi(grid.front());
    for (const auto& p : grid)
        for (std::size_t i = 0; i < dim; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }

    std::vector<std::size_t> out(grid.size() * num_actions, npos);
    for (std::size_t s = 0; s < grid.size(); ++s) {
        for (ActionIndex a = 0; a < num_actions; ++a) {
            const Point image = f(grid[s], a);
            if (image.size() != dim)
                throw SchemaError("dynamics returned a point of the wrong dimension");
            bool inside = true;
            for (std::size_t i = 0; i < dim && inside; ++i) {
                const double slack = 1e-12 * std::max(1.0, hi[i] - lo[i]);
                inside = std::isfinite(image[i]) && image[i] >= lo[i] - slack &&
                         image[i] <= hi[i] + slack;
            }
            if (!inside)
                continue;
            double best = std::numeric_limits<double>::infinity();
            std::size_t arg = npos;
            for (std::size_t z = 0; z < grid.size(); ++z) {
                double d2 = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double d = grid[z][i] - image[i];
                    d2 += d * d;
                }
                if (d2 < best) {
                    best = d2;
                    arg = z;
                }
            }
            out[s * num_actions + a] = arg;
        }
    }
    return out;
}

ControlProblem discretize(std::string name, std::vector<Point> grid,
                          std::vector<std::string> actions, const Dynamics& f,
                          const RunningCost& k) {
    const auto table = snap_dynamics(f, grid, actions.size());
    ControlProblem problem(std::move(name), std::move(grid), std::move(actions));
    const auto na = problem.num_actions();
    for (StateIndex s = 0; s < problem.num_states(); ++s)
        for (ActionIndex a = 0; a < na; ++a)
            if (table[s * na + a] != npos)
                problem.set_transition(s, a, table[s * na + a], k(problem.state(s), a));
    return problem;
}

} // namespace lra
