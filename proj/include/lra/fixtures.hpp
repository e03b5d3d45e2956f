#pragma once

#include <cstdint>
#include <random>

#include "lra/problem.hpp"

namespace lra {

/// Portable uniform draws on top of mt19937_64 (the standard distributions are
/// implementation-defined, so seeded output would differ between libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

private:
    std::mt19937_64 engine_;
};

/// y(t+1) = u y(t) on a symmetric grid of `points` values in [-1, 1], actions
/// {-1, +1}, cost k(y, u) = y. `points` must be odd so that 0 is a grid point.
ControlProblem toy_problem(std::size_t points = 21);

/// Three states: 0->1 cost 3, 1->0 cost 1, 0->2 cost 0, 2->2 cost 4, 1->1 cost 5.
ControlProblem three_state_problem();

/// Ring of `states` states with actions "stay" and "step", every cost equal to `value`.
ControlProblem constant_cost_problem(std::size_t states, double value);

/// Random deterministic system. Action 0 is always a self-loop so every state
/// stays viable; the other actions are admissible with probability 3/4 and jump
/// to a uniformly drawn state. Costs are uniform in [-1, 1].
ControlProblem random_problem(std::size_t states, std::size_t actions, std::uint64_t seed);

} // namespace lra
