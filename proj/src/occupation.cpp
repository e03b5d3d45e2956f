#include "lra/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lra {

double OccupationalMeasure::total() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double OccupationalMeasure::integrate(std::span<const double> q) const {
    if (q.size() != weights.size())
        throw std::invalid_argument("test function and measure disagree on |G|");
    double s = 0.0;
    for (std::size_t p = 0; p < q.size(); ++p)
        s += q[p] * weights[p];
    return s;
}

double FlowMeasure::total() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

OccupationalMeasure dirac(const Graph& graph, PairIndex p) {
    if (p >= graph.num_pairs())
        throw std::out_of_range("pair index out of range");
    OccupationalMeasure m{std::vector<double>(graph.num_pairs(), 0.0)};
    m.weights[p] = 1.0;
    return m;
}

MetricBasis::MetricBasis(std::vector<std::vector<double>> values) : values_(std::move(values)) {
    if (values_.empty())
        throw std::invalid_argument("metric basis needs at least one function");
    const auto n = values_.front().size();
    for (const auto& q : values_) {
        if (q.size() != n)
            throw std::invalid_argument("basis functions must share the pair indexing");
        for (double v : q)
            if (!(std::abs(v) <= 1.0))
                throw std::invalid_argument("basis functions must be bounded by 1 on G");
    }
}

double MetricBasis::weight(std::size_t j) const { return std::ldexp(1.0, -static_cast<int>(j + 1)); }

namespace {

double chebyshev_t(std::size_t n, double x) {
    x = std::clamp(x, -1.0, 1.0);
    double t0 = 1.0, t1 = x;
    if (n == 0)
        return t0;
    for (std::size_t k = 1; k < n; ++k) {
        const double t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return std::clamp(t1, -1.0, 1.0);
}

// All multi-indices of total degree `d` in `dims` coordinates, lexicographic.
void compositions(std::size_t d, std::size_t dims, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() + 1 == dims) {
        cur.push_back(d);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t first = 0; first <= d; ++first) {
        cur.push_back(first);
        compositions(d - first, dims, cur, out);
        cur.pop_back();
    }
}

} // namespace

MetricBasis MetricBasis::chebyshev(const Graph& graph, std::size_t J) {
    if (J == 0)
        throw std::invalid_argument("J must be positive");
    const auto& problem = graph.problem();
    const auto dims = problem.dimension();
    std::vector<double> lo(problem.state(0)), hi(problem.state(0));
    for (const auto& y : problem.states())
        for (std::size_t i = 0; i < dims; ++i) {
            lo[i] = std::min(lo[i], y[i]);
            hi[i] = std::max(hi[i], y[i]);
        }
    // Coordinates rescaled to [-1, 1], per pair.
    std::vector<std::vector<double>> scaled(graph.num_pairs(), std::vector<double>(dims, 0.0));
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& y = problem.state(graph.pair(p).state);
        for (std::size_t i = 0; i < dims; ++i)
            scaled[p][i] = hi[i] > lo[i] ? 2.0 * (y[i] - lo[i]) / (hi[i] - lo[i]) - 1.0 : 0.0;
    }

    const auto factors = problem.num_actions() + 1;
    std::vector<std::vector<double>> values;
    for (std::size_t degree = 0; values.size() < J; ++degree) {
        std::vector<std::vector<std::size_t>> indices;
        std::vector<std::size_t> cur;
        compositions(degree, dims, cur, indices);
        for (const auto& alpha : indices) {
            std::vector<double> poly(graph.num_pairs(), 1.0);
            for (PairIndex p = 0; p < graph.num_pairs(); ++p)
                for (std::size_t i = 0; i < dims; ++i)
                    poly[p] *= chebyshev_t(alpha[i], scaled[p][i]);
            for (std::size_t f = 0; f < factors && values.size() < J; ++f) {
                if (f == 0) {
                    values.push_back(poly);
                    continue;
                }
                std::vector<double> q(graph.num_pairs(), 0.0);
                for (PairIndex p = 0; p < graph.num_pairs(); ++p)
                    if (graph.pair(p).action == f - 1)
                        q[p] = poly[p];
                values.push_back(std::move(q));
            }
            if (values.size() >= J)
                break;
        }
    }
    return MetricBasis(std::move(values));
}

OccupationalMeasure occupational_measure(const Graph& graph, const Trajectory& trajectory,
                                         std::size_t S) {
    if (S == 0)
        throw std::invalid_argument("horizon S must be positive");
    if (trajectory.steps() < S)
        throw std::invalid_argument("trajectory shorter than the requested horizon");
    const auto pairs = pair_sequence(graph, trajectory);
    OccupationalMeasure m{std::vector<double>(graph.num_pairs(), 0.0)};
    const double w = 1.0 / static_cast<double>(S);
    for (std::size_t t = 0; t < S; ++t)
        m.weights[pairs[t]] += w;
    return m;
}

OccupationalMeasure discounted_occupational_measure(const Graph& graph,
                                                    const Trajectory& trajectory, double alpha,
                                                    double tail_tol) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    const auto P = pair_sequence(graph, trajectory);
    const auto S = P.size();
    if (S == 0)
        throw std::invalid_argument("trajectory has no steps");
    const auto& Y = trajectory.states;

    // For each period p, the recorded pairs repeat with period p from
    // last_bad[p] + 1 on. The earliest start (then the shortest period) wins.
    std::size_t best_start = npos, best_period = npos;
    for (std::size_t p = 1; p <= S; ++p) {
        std::size_t start = 0;
        for (std::size_t t = S - p; t-- > 0;) {
            if (P[t] != P[t + p]) {
                start = t + 1;
                break;
            }
        }
        if (start + p > S)
            continue;
        if (start + p == S && Y[S] != Y[start])
            continue;
        if (start < best_start) {
            best_start = start;
            best_period = p;
        }
    }

    OccupationalMeasure m{std::vector<double>(graph.num_pairs(), 0.0)};
    if (best_start == npos) {
        const double tail = std::pow(alpha, static_cast<double>(S));
        if (tail > tail_tol)
            throw NoCycleDetected("trajectory does not close a cycle within " +
                                  std::to_string(S) + " steps");
        double a_t = 1.0;
        for (std::size_t t = 0; t < S; ++t) {
            m.weights[P[t]] += (1.0 - alpha) * a_t;
            a_t *= alpha;
        }
        m.weights[P[S - 1]] += tail;
        return m;
    }

    double a_t = 1.0;
    for (std::size_t t = 0; t < best_start; ++t) {
        m.weights[P[t]] += (1.0 - alpha) * a_t;
        a_t *= alpha;
    }
    const double lap = 1.0 - std::pow(alpha, static_cast<double>(best_period));
    for (std::size_t c = 0; c < best_period; ++c) {
        m.weights[P[best_start + c]] += (1.0 - alpha) * a_t / lap;
        a_t *= alpha;
    }
    return m;
}

double rho(const OccupationalMeasure& m1, const OccupationalMeasure& m2,
           const MetricBasis& basis) {
    if (m1.weights.size() != m2.weights.size() || m1.weights.size() != basis.num_pairs())
        throw std::invalid_argument("measures and basis disagree on |G|");
    double d = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto q = basis.function(j);
        double diff = 0.0;
        for (std::size_t p = 0; p < q.size(); ++p)
            diff += q[p] * (m1.weights[p] - m2.weights[p]);
        d += basis.weight(j) * std::abs(diff);
    }
    return d;
}

double hausdorff(std::span<const OccupationalMeasure> set1,
                 std::span<const OccupationalMeasure> set2, const MetricBasis& basis) {
    if (set1.empty() || set2.empty())
        throw EmptySet("Hausdorff distance needs two nonempty sets");
    auto directed = [&](std::span<const OccupationalMeasure> a,
                        std::span<const OccupationalMeasure> b) {
        double sup = 0.0;
        for (const auto& x : a) {
            double inf = std::numeric_limits<double>::infinity();
            for (const auto& y : b)
                inf = std::min(inf, rho(x, y, basis));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(set1, set2), directed(set2, set1));
}

std::vector<double> w_residuals(const Graph& graph, std::span<const double> weights) {
    if (weights.size() != graph.num_pairs())
        throw std::invalid_argument("measure does not match |G|");
    std::vector<double> r(graph.num_states(), 0.0);
    for (PairIndex p = 0; p < weights.size(); ++p) {
        const auto& pr = graph.pair(p);
        r[pr.next] += weights[p];
        r[pr.state] -= weights[p];
    }
    return r;
}

std::vector<double> w_alpha_residuals(const Graph& graph, std::span<const double> weights,
                                      double alpha, StateIndex y0) {
    if (weights.size() != graph.num_pairs())
        throw std::invalid_argument("measure does not match |G|");
    if (y0 >= graph.num_states())
        throw std::out_of_range("initial state out of range");
    std::vector<double> r(graph.num_states(), 0.0);
    double mass = 0.0;
    for (PairIndex p = 0; p < weights.size(); ++p) {
        const auto& pr = graph.pair(p);
        r[pr.next] += alpha * weights[p];
        r[pr.state] -= weights[p];
        mass += weights[p];
    }
    r[y0] += (1.0 - alpha) * mass;
    return r;
}

namespace {

bool is_probability(const OccupationalMeasure& m, double tol) {
    for (double w : m.weights)
        if (w < -tol)
            return false;
    return std::abs(m.total() - 1.0) <= tol;
}

bool all_within(const std::vector<double>& r, double tol) {
    return std::all_of(r.begin(), r.end(), [tol](double v) { return std::abs(v) <= tol; });
}

} // namespace

bool membership_W(const Graph& graph, const OccupationalMeasure& m, double tol) {
    return is_probability(m, tol) && all_within(w_residuals(graph, m.weights), tol);
}

bool membership_W_alpha(const Graph& graph, const OccupationalMeasure& m, double alpha,
                        StateIndex y0, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("discount factor must lie in (0, 1)");
    return is_probability(m, tol) && all_within(w_alpha_residuals(graph, m.weights, alpha, y0), tol);
}

} // namespace lra
