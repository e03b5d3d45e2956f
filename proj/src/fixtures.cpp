#include "lra/fixtures.hpp"

#include <stdexcept>

namespace lra {

ControlProblem toy_problem(std::size_t points) {
    if (points < 3 || points % 2 == 0)
        throw std::invalid_argument("toy grid needs an odd number of points >= 3");
    const double half = static_cast<double>(points - 1);
    std::vector<Point> grid;
    for (std::size_t i = 0; i < points; ++i)
        grid.push_back({(2.0 * static_cast<double>(i) - half) / half});
    return discretize(
        "toy", std::move(grid), {"-1", "+1"},
        [](std::span<const double> y, ActionIndex u) {
            return Point{u == 0 ? -y[0] : y[0]};
        },
        [](std::span<const double> y, ActionIndex) { return y[0]; });
}

ControlProblem three_state_problem() {
    ControlProblem p("threestate", {{0.0}, {1.0}, {2.0}}, {"a", "b"});
    p.set_transition(0, 0, 1, 3.0);
    p.set_transition(0, 1, 2, 0.0);
    p.set_transition(1, 0, 0, 1.0);
    p.set_transition(1, 1, 1, 5.0);
    p.set_transition(2, 0, 2, 4.0);
    return p;
}

ControlProblem constant_cost_problem(std::size_t states, double value) {
    if (states == 0)
        throw std::invalid_argument("need at least one state");
    std::vector<Point> grid;
    for (std::size_t i = 0; i < states; ++i)
        grid.push_back({static_cast<double>(i)});
    ControlProblem p("constant", std::move(grid), {"stay", "step"});
    for (StateIndex s = 0; s < states; ++s) {
        p.set_transition(s, 0, s, value);
        p.set_transition(s, 1, (s + 1) % states, value);
    }
    return p;
}

ControlProblem random_problem(std::size_t states, std::size_t actions, std::uint64_t seed) {
    if (states == 0 || actions == 0)
        throw std::invalid_argument("need at least one state and one action");
    Rng rng(seed);
    std::vector<Point> grid;
    for (std::size_t i = 0; i < states; ++i)
        grid.push_back({static_cast<double>(i)});
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < actions; ++a)
        labels.push_back("a" + std::to_string(a));
    ControlProblem p("random-" + std::to_string(seed), std::move(grid), std::move(labels));
    for (StateIndex s = 0; s < states; ++s) {
        p.set_transition(s, 0, s, rng.uniform(-1.0, 1.0));
        for (ActionIndex a = 1; a < actions; ++a) {
            const bool on = rng.uniform() < 0.75;
            const auto next = rng.index(states);
            const double cost = rng.uniform(-1.0, 1.0);
            if (on)
                p.set_transition(s, a, next, cost);
        }
    }
    return p;
}

} // namespace lra
