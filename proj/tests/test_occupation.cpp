#include <doctest.h>

#include <cmath>

#include "lra/dp.hpp"
#include "lra/fixtures.hpp"
#include "lra/idlp.hpp"
#include "lra/occupation.hpp"

using namespace lra;

namespace {

// States: 0 -> 1 (pair 0), 1 <-> 2 (pairs 1, 2), 3 fixed (pair 3).
Graph small_graph() {
    ControlProblem p("small", {{0.0}, {1.0}, {2.0}, {3.0}}, {"go"});
    p.set_transition(0, 0, 1, 1.0);
    p.set_transition(1, 0, 2, 2.0);
    p.set_transition(2, 0, 1, 3.0);
    p.set_transition(3, 0, 3, 4.0);
    return build_graph(p);
}

Trajectory follow(const Graph& g, StateIndex y0, std::size_t steps) {
    return rollout(g, y0, [](StateIndex, std::size_t) { return ActionIndex{0}; }, steps);
}

std::vector<double> random_function(Rng& rng, std::size_t n) {
    std::vector<double> q(n);
    for (auto& v : q)
        v = rng.uniform(-1.0, 1.0);
    return q;
}

Trajectory random_walk(const Graph& g, StateIndex y0, std::size_t steps, Rng& rng) {
    return rollout(
        g, y0,
        [&](StateIndex s, std::size_t) {
            const auto out = g.out_pairs(s);
            return g.pair(out[rng.index(out.size())]).action;
        },
        steps);
}

} // namespace

TEST_CASE("Cesaro measure examples") {
    const auto g = small_graph();
    auto m = occupational_measure(g, follow(g, 1, 4), 4);
    CHECK(m.weights == std::vector<double>{0.0, 0.5, 0.5, 0.0});
    m = occupational_measure(g, follow(g, 3, 7), 7);
    CHECK(m.weights[3] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.weights[0] + m.weights[1] + m.weights[2] == 0.0);

    ControlProblem p("prefix", {{0.0}, {1.0}}, {"go"});
    p.set_transition(0, 0, 1, 0.0);
    p.set_transition(1, 0, 1, 0.0);
    const auto h = build_graph(p);
    m = occupational_measure(h, follow(h, 0, 4), 4);
    CHECK(m.weights[0] == doctest::Approx(0.25));
    CHECK(m.weights[1] == doctest::Approx(0.75));
}

TEST_CASE("Cesaro measure requires enough steps") {
    const auto g = small_graph();
    CHECK_THROWS(occupational_measure(g, follow(g, 0, 2), 3));
}

TEST_CASE("discounted measure examples") {
    const auto g = small_graph();
    auto m = discounted_occupational_measure(g, follow(g, 3, 3), 0.7);
    CHECK(m.weights[3] == doctest::Approx(1.0).epsilon(1e-15));

    const double alpha = 0.8;
    m = discounted_occupational_measure(g, follow(g, 1, 4), alpha);
    CHECK(m.weights[1] == doctest::Approx(1.0 / (1.0 + alpha)).epsilon(1e-14));
    CHECK(m.weights[2] == doctest::Approx(alpha / (1.0 + alpha)).epsilon(1e-14));

    ControlProblem p("prefix", {{0.0}, {1.0}}, {"go"});
    p.set_transition(0, 0, 1, 0.0);
    p.set_transition(1, 0, 1, 0.0);
    const auto h = build_graph(p);
    m = discounted_occupational_measure(h, follow(h, 0, 3), 0.5);
    CHECK(m.weights[0] == doctest::Approx(0.5));
    CHECK(m.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("discounted measure without a detectable cycle") {
    const auto g = small_graph();
    // 0 -> 1 -> 2 is too short to show the 1 <-> 2 cycle twice
    const auto short_traj = follow(g, 0, 1);
    CHECK_THROWS_AS(discounted_occupational_measure(g, short_traj, 0.9), NoCycleDetected);
    // A negligible tail is charged to the last pair instead.
    const auto m = discounted_occupational_measure(g, short_traj, 1e-13, 1e-12);
    CHECK(m.total() == doctest::Approx(1.0));
}

TEST_CASE("integral identities on random trajectories") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = build_graph(random_problem(3 + trial % 12, 2 + trial % 3, 100 + trial));
        const auto S = 1 + rng.index(60);
        const auto traj = random_walk(g, rng.index(g.num_states()), S, rng);
        const auto q = random_function(rng, g.num_pairs());
        const auto pairs = pair_sequence(g, traj);

        const auto m = occupational_measure(g, traj, S);
        double direct = 0.0;
        for (auto p : pairs)
            direct += q[p];
        CHECK(m.integrate(q) == doctest::Approx(direct / static_cast<double>(S)).epsilon(1e-12));
        CHECK(m.total() == doctest::Approx(1.0));
    }
}

TEST_CASE("discounted identity against a long direct sum") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = build_graph(random_problem(3 + trial % 10, 3, 200 + trial));
        const double alpha = rng.uniform(0.3, 0.95);
        const auto y0 = rng.index(g.num_states());
        const auto u = discounted_greedy_policy(g, value_iteration_discounted(g, alpha));
        const auto traj = rollout(g, y0, u, 2 * g.num_states() + 2);
        const auto m = discounted_occupational_measure(g, traj, alpha);
        const auto q = random_function(rng, g.num_pairs());

        // Stationary feedback repeats forever, so extend it directly.
        const auto longer = rollout(g, y0, u, 2000);
        double direct = 0.0, a_t = 1.0;
        for (auto p : pair_sequence(g, longer)) {
            direct += (1.0 - alpha) * a_t * q[p];
            a_t *= alpha;
        }
        CHECK(std::abs(m.integrate(q) - direct) <= 1e-9);
        CHECK(membership_W_alpha(g, m, alpha, y0));
    }
}

TEST_CASE("rho definition and metric properties") {
    ControlProblem p("line", {{0.2}, {0.8}}, {"stay"});
    p.set_transition(0, 0, 0, 0.0);
    p.set_transition(1, 0, 1, 0.0);
    const auto g = build_graph(p);
    const MetricBasis basis(std::vector<std::vector<double>>{{0.2, 0.8}});
    CHECK(rho(dirac(g, 0), dirac(g, 1), basis) == doctest::Approx(0.3));
    CHECK(rho(dirac(g, 0), dirac(g, 0), basis) == 0.0);

    const auto h = build_graph(random_problem(8, 3, 5));
    const auto cheb = MetricBasis::chebyshev(h);
    CHECK(cheb.size() == 64);
    Rng rng(3);
    auto random_measure = [&] {
        std::vector<double> w(h.num_pairs());
        double s = 0.0;
        for (auto& v : w)
            s += (v = rng.uniform());
        for (auto& v : w)
            v /= s;
        return OccupationalMeasure{w};
    };
    for (int i = 0; i < 20; ++i) {
        const auto a = random_measure(), b = random_measure(), c = random_measure();
        CHECK(rho(a, b, cheb) == rho(b, a, cheb));
        CHECK(rho(a, c, cheb) <= rho(a, b, cheb) + rho(b, c, cheb) + 1e-15);
        CHECK(rho(a, b, cheb) >= 0.0);
    }
}

TEST_CASE("Chebyshev basis is bounded and deterministic") {
    const auto g = build_graph(toy_problem(21));
    const auto a = MetricBasis::chebyshev(g, 40);
    const auto b = MetricBasis::chebyshev(g, 40);
    for (std::size_t j = 0; j < a.size(); ++j) {
        const auto qa = a.function(j), qb = b.function(j);
        for (std::size_t p = 0; p < qa.size(); ++p) {
            CHECK(std::abs(qa[p]) <= 1.0);
            CHECK(qa[p] == qb[p]);
        }
    }
    CHECK(a.weight(0) == 0.5);
    CHECK(a.weight(2) == 0.125);
    CHECK_THROWS(MetricBasis(std::vector<std::vector<double>>{{1.5}}));
}

TEST_CASE("Hausdorff distance") {
    const auto g = small_graph();
    const auto basis = MetricBasis::chebyshev(g);
    const std::vector<OccupationalMeasure> one{dirac(g, 0)};
    const std::vector<OccupationalMeasure> two{dirac(g, 0), dirac(g, 3)};
    CHECK(hausdorff(one, one, basis) == 0.0);
    CHECK(hausdorff(one, two, basis) == doctest::Approx(rho(dirac(g, 0), dirac(g, 3), basis)));
    CHECK(hausdorff(two, one, basis) == hausdorff(one, two, basis));
    CHECK_THROWS_AS(hausdorff({}, one, basis), EmptySet);

    const std::vector<OccupationalMeasure> a{dirac(g, 0)}, b{dirac(g, 1)}, c{dirac(g, 2)};
    CHECK(hausdorff(a, c, basis) <= hausdorff(a, b, basis) + hausdorff(b, c, basis) + 1e-15);
}

TEST_CASE("membership in W") {
    const auto g = small_graph();
    CHECK(membership_W(g, dirac(g, 3)));
    CHECK(membership_W(g, OccupationalMeasure{{0.0, 0.5, 0.5, 0.0}}));
    CHECK_FALSE(membership_W(g, dirac(g, 0)));
    const auto r = w_residuals(g, dirac(g, 0).weights);
    CHECK(r[0] == -1.0);
    CHECK(r[1] == 1.0);
    CHECK_FALSE(membership_W(g, OccupationalMeasure{{0.0, 0.25, 0.25, 0.0}}));
}

TEST_CASE("membership in W(alpha, y0)") {
    const auto g = small_graph();
    const double alpha = 0.6;
    const auto fixed = discounted_occupational_measure(g, follow(g, 3, 2), alpha);
    CHECK(membership_W_alpha(g, fixed, alpha, 3));

    // A measure generated from state 0 fails at another start: residual (1 - alpha) at y0.
    const auto from0 = discounted_occupational_measure(g, follow(g, 0, 6), alpha);
    CHECK(membership_W_alpha(g, from0, alpha, 0));
    CHECK_FALSE(membership_W_alpha(g, from0, alpha, 3));
    const auto r = w_alpha_residuals(g, from0.weights, alpha, 3);
    CHECK(std::abs(r[3]) == doctest::Approx(1.0 - alpha));
}

TEST_CASE("distance to W shrinks along optimal rollouts") {
    const auto g = build_graph(random_problem(10, 3, 42));
    const auto basis = MetricBasis::chebyshev(g);
    const double M = g.cost_bound().M;
    double first = -1.0, last = -1.0;
    for (std::size_t T : {8, 32, 128, 512}) {
        const auto sol = value_iteration_avg_with_policy(g, T);
        const auto traj = rollout(g, 0, cesaro_policy(sol), T);
        const double d = project_to_W(g, occupational_measure(g, traj, T), basis).distance;
        if (first < 0)
            first = d;
        last = d;
        if (T >= 128)
            CHECK(d <= 10.0 * 2.0 * M / static_cast<double>(T));
    }
    CHECK(last <= first + 1e-12);
}
