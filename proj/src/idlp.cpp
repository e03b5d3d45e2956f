#include "lra/idlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace lra {

namespace {

using lp::Bound;
using lp::Entry;
using lp::LinearProgram;
using lp::RowType;
using lp::Sense;

void check_state(const Graph& graph, StateIndex y0) {
    if (y0 >= graph.num_states())
        throw std::out_of_range("start state out of range");
}

void check_theta(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("theta must be a finite nonnegative number");
}

SolverStats stats_of(const LinearProgram& lp, const lp::LpSolution& sol) {
    SolverStats s;
    s.rows = lp.num_rows();
    s.cols = lp.num_vars();
    s.iterations = sol.iterations;
    s.bland_used = sol.bland_used;
    s.kkt_residual = lp::kkt_residuals(lp, sol).max();
    return s;
}

// Adds gamma in W: sum gamma = 1 and inflow - outflow = 0 at every state.
// Returns the row index of the normalization.
std::size_t add_w_rows(LinearProgram& lp, const Graph& graph, std::size_t gamma0) {
    const auto G = graph.num_pairs();
    std::vector<Entry> all;
    for (PairIndex p = 0; p < G; ++p)
        all.emplace_back(gamma0 + p, 1.0);
    const auto norm = lp.add_row(all, RowType::equal, 1.0, "mass");
    std::vector<std::vector<Entry>> rows(graph.num_states());
    for (PairIndex p = 0; p < G; ++p) {
        const auto& pr = graph.pair(p);
        rows[pr.next].emplace_back(gamma0 + p, 1.0);
        rows[pr.state].emplace_back(gamma0 + p, -1.0);
    }
    for (StateIndex z = 0; z < graph.num_states(); ++z)
        lp.add_row(rows[z], RowType::equal, 0.0, "W" + std::to_string(z));
    return norm;
}

lp::LpSolution checked_solve(const LinearProgram& lp, const lp::SolverOptions& options,
                             const char* what) {
    auto sol = lp::solve(lp, options);
    if (sol.status == lp::Status::infeasible)
        throw PrimalInfeasible(std::string(what) + ": linear program is infeasible");
    if (sol.status == lp::Status::unbounded)
        throw DualUnbounded(std::string(what) + ": linear program is unbounded");
    return sol;
}

} // namespace

PrimalResult solve_primal(const Graph& graph, StateIndex y0, double theta,
                          const lp::SolverOptions& options) {
    check_state(graph, y0);
    check_theta(theta);
    const auto G = graph.num_pairs();
    const auto S = graph.num_states();

    LinearProgram lp(Sense::minimize);
    for (PairIndex p = 0; p < G; ++p)
        lp.add_variable(graph.pair(p).cost, Bound::nonnegative, "gamma" + std::to_string(p));
    for (PairIndex p = 0; p < G; ++p)
        lp.add_variable(theta, Bound::nonnegative, "xi" + std::to_string(p));

    add_w_rows(lp, graph, 0);
    std::vector<std::vector<Entry>> omega(S);
    for (PairIndex p = 0; p < G; ++p) {
        const auto& pr = graph.pair(p);
        omega[y0].emplace_back(p, 1.0);
        omega[pr.state].emplace_back(p, -1.0);
        omega[pr.next].emplace_back(G + p, 1.0);
        omega[pr.state].emplace_back(G + p, -1.0);
    }
    for (StateIndex z = 0; z < S; ++z)
        lp.add_row(omega[z], RowType::equal, 0.0, "Omega" + std::to_string(z));

    std::size_t cap_row = npos;
    if (theta == 0.0) {
        std::vector<Entry> xi;
        for (PairIndex p = 0; p < G; ++p)
            xi.emplace_back(G + p, 1.0);
        cap_row = lp.add_row(xi, RowType::less_equal, static_cast<double>(S * G), "xi_cap");
    }

    const auto sol = checked_solve(lp, options, "primal");
    PrimalResult out;
    out.value = sol.objective_value;
    out.pair.gamma.weights.assign(sol.primal.begin(), sol.primal.begin() + G);
    out.pair.xi.weights.assign(sol.primal.begin() + G, sol.primal.end());
    for (auto* w : {&out.pair.gamma.weights, &out.pair.xi.weights})
        for (auto& v : *w)
            v = std::max(v, 0.0);
    if (cap_row != npos) {
        out.cap_multiplier = sol.dual[cap_row];
        out.cap_active = std::abs(out.cap_multiplier) > options.duality_tol;
    }
    out.stats = stats_of(lp, sol);
    return out;
}

DualResult solve_dual(const Graph& graph, StateIndex y0, double theta,
                      const lp::SolverOptions& options) {
    check_state(graph, y0);
    check_theta(theta);
    const auto S = graph.num_states();

    LinearProgram lp(Sense::maximize);
    const auto mu = lp.add_variable(1.0, Bound::free, "mu");
    const std::size_t psi0 = 1, eta0 = 1 + S;
    for (StateIndex s = 0; s < S; ++s)
        lp.add_variable(0.0, Bound::free, "psi" + std::to_string(s));
    for (StateIndex s = 0; s < S; ++s)
        lp.add_variable(0.0, Bound::free, "eta" + std::to_string(s));

    // mu + psi(y) - psi(y0) + eta(y) - eta(f) <= k
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        std::vector<Entry> row{{mu, 1.0},
                               {psi0 + pr.state, 1.0},
                               {psi0 + y0, -1.0},
                               {eta0 + pr.state, 1.0},
                               {eta0 + pr.next, -1.0}};
        lp.add_row(row, RowType::less_equal, pr.cost, "value" + std::to_string(p));
    }
    // psi(y) - psi(f) <= theta
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        if (pr.state == pr.next)
            continue;
        lp.add_row({{psi0 + pr.state, 1.0}, {psi0 + pr.next, -1.0}}, RowType::less_equal, theta,
                   "mono" + std::to_string(p));
    }

    const auto sol = checked_solve(lp, options, "dual");
    DualResult out;
    out.value = sol.objective_value;
    out.certificate.mu = sol.primal[mu];
    out.certificate.psi.assign(sol.primal.begin() + psi0, sol.primal.begin() + eta0);
    out.certificate.eta.assign(sol.primal.begin() + eta0, sol.primal.end());
    out.stats = stats_of(lp, sol);
    return out;
}

QFormResult solve_q_form(const Graph& graph, StateIndex y0, double theta,
                         const lp::SolverOptions& options) {
    check_state(graph, y0);
    check_theta(theta);
    const auto S = graph.num_states();

    LinearProgram lp(Sense::maximize);
    const std::size_t psi0 = 0, eta0 = S;
    for (StateIndex s = 0; s < S; ++s)
        lp.add_variable(s == y0 ? 1.0 : 0.0, Bound::free, "psi" + std::to_string(s));
    for (StateIndex s = 0; s < S; ++s)
        lp.add_variable(0.0, Bound::free, "eta" + std::to_string(s));

    // psi(y) + eta(y) - eta(f) <= k
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        lp.add_row({{psi0 + pr.state, 1.0}, {eta0 + pr.state, 1.0}, {eta0 + pr.next, -1.0}},
                   RowType::less_equal, pr.cost, "value" + std::to_string(p));
    }
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        if (pr.state == pr.next)
            continue;
        lp.add_row({{psi0 + pr.state, 1.0}, {psi0 + pr.next, -1.0}}, RowType::less_equal, theta,
                   "mono" + std::to_string(p));
    }

    const auto sol = checked_solve(lp, options, "potential form");
    QFormResult out;
    out.value = sol.objective_value;
    out.psi.assign(sol.primal.begin() + psi0, sol.primal.begin() + eta0);
    out.eta.assign(sol.primal.begin() + eta0, sol.primal.end());
    out.stats = stats_of(lp, sol);
    return out;
}

double ergodic_inner_lp(const Graph& graph, const ValueFunction& w,
                        const lp::SolverOptions& options) {
    if (w.size() != graph.num_states())
        throw std::invalid_argument("w must be defined on every state");
    LinearProgram lp(Sense::minimize);
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        lp.add_variable(pr.cost - w[pr.state]);
    }
    add_w_rows(lp, graph, 0);
    return checked_solve(lp, options, "ergodic").objective_value;
}

double ergodic_inner_dual(const Graph& graph, const ValueFunction& w,
                          const lp::SolverOptions& options) {
    if (w.size() != graph.num_states())
        throw std::invalid_argument("w must be defined on every state");
    const auto S = graph.num_states();
    LinearProgram lp(Sense::maximize);
    const auto t = lp.add_variable(1.0, Bound::free, "t");
    for (StateIndex s = 0; s < S; ++s)
        lp.add_variable(0.0, Bound::free, "eta" + std::to_string(s));
    // t + eta(y) - eta(f) <= k - w(y)
    for (PairIndex p = 0; p < graph.num_pairs(); ++p) {
        const auto& pr = graph.pair(p);
        lp.add_row({{t, 1.0}, {1 + pr.state, 1.0}, {1 + pr.next, -1.0}}, RowType::less_equal,
                   pr.cost - w[pr.state]);
    }
    return checked_solve(lp, options, "ergodic dual").objective_value;
}

PeriodicValue v_per(const Graph& graph, StateIndex y0) {
    check_state(graph, y0);
    const auto R = graph.reachable_from(y0);
    const auto n = R.size();
    std::vector<std::size_t> local(graph.num_states(), npos);
    for (std::size_t i = 0; i < n; ++i)
        local[R[i]] = i;

    // D[k][v]: cheapest walk with exactly k edges ending at v, from any start.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, inf));
    std::vector<std::vector<PairIndex>> pred(n + 1, std::vector<PairIndex>(n, npos));
    std::fill(D[0].begin(), D[0].end(), 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (D[k - 1][i] == inf)
                continue;
            for (auto p : graph.out_pairs(R[i])) {
                const auto& pr = graph.pair(p);
                const auto j = local[pr.next];
                const double d = D[k - 1][i] + pr.cost;
                if (d < D[k][j]) {
                    D[k][j] = d;
                    pred[k][j] = p;
                }
            }
        }
    }

    double best = inf;
    std::size_t best_v = npos;
    for (std::size_t v = 0; v < n; ++v) {
        if (D[n][v] == inf)
            continue;
        double worst = -inf;
        for (std::size_t k = 0; k < n; ++k)
            if (D[k][v] < inf)
                worst = std::max(worst, (D[n][v] - D[k][v]) / static_cast<double>(n - k));
        if (worst < best) {
            best = worst;
            best_v = v;
        }
    }
    if (best_v == npos)
        throw ViabilityViolation(y0);

    // Walk back n edges from the critical vertex; it closes at least one cycle.
    std::vector<PairIndex> walk(n);
    std::size_t v = best_v;
    for (std::size_t k = n; k >= 1; --k) {
        walk[k - 1] = pred[k][v];
        v = local[graph.pair(walk[k - 1]).state];
    }

    // Split the walk into simple cycles and keep the cheapest.
    std::vector<PairIndex> best_cycle;
    double best_mean = inf;
    std::vector<PairIndex> stack;
    std::vector<std::size_t> pos(n, npos); // stack position of a state's outgoing pair
    for (auto p : walk) {
        pos[local[graph.pair(p).state]] = stack.size();
        stack.push_back(p);
        const auto t = local[graph.pair(p).next];
        if (pos[t] == npos)
            continue;
        const auto first = stack.begin() + static_cast<std::ptrdiff_t>(pos[t]);
        double sum = 0.0;
        for (auto it = first; it != stack.end(); ++it)
            sum += graph.pair(*it).cost;
        const double mean = sum / static_cast<double>(stack.end() - first);
        if (mean < best_mean) {
            best_mean = mean;
            best_cycle.assign(first, stack.end());
        }
        for (auto it = first; it != stack.end(); ++it)
            pos[local[graph.pair(*it).state]] = npos;
        stack.erase(first, stack.end());
    }

    // Shortest prefix from y0 to any cycle state.
    std::vector<std::size_t> on_cycle(graph.num_states(), npos);
    for (std::size_t i = 0; i < best_cycle.size(); ++i)
        on_cycle[graph.pair(best_cycle[i]).state] = i;
    std::vector<PairIndex> via(graph.num_states(), npos);
    std::vector<char> visited(graph.num_states(), 0);
    std::deque<StateIndex> queue{y0};
    visited[y0] = 1;
    StateIndex hit = y0;
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        if (on_cycle[s] != npos) {
            hit = s;
            break;
        }
        for (auto p : graph.out_pairs(s)) {
            const auto t = graph.pair(p).next;
            if (!visited[t]) {
                visited[t] = 1;
                via[t] = p;
                queue.push_back(t);
            }
        }
    }

    PeriodicValue out;
    out.value = best_mean;
    std::vector<PairIndex> prefix;
    for (auto s = hit; s != y0; s = graph.pair(via[s]).state)
        prefix.push_back(via[s]);
    std::reverse(prefix.begin(), prefix.end());
    auto& pre = out.process.prefix;
    pre.states.push_back(y0);
    for (auto p : prefix) {
        pre.controls.push_back(graph.pair(p).action);
        pre.states.push_back(graph.pair(p).next);
    }
    std::rotate(best_cycle.begin(), best_cycle.begin() + static_cast<std::ptrdiff_t>(on_cycle[hit]),
                best_cycle.end());
    auto& cyc = out.process.cycle;
    cyc.states.push_back(hit);
    for (auto p : best_cycle) {
        cyc.controls.push_back(graph.pair(p).action);
        cyc.states.push_back(graph.pair(p).next);
    }
    out.process.period = best_cycle.size();
    return out;
}

bool k_membership(const Graph& graph, const ValueFunction& w, double tol) {
    if (w.size() != graph.num_states())
        throw std::invalid_argument("w must be defined on every state");
    for (const auto& pr : graph.pairs())
        if (w[pr.state] > w[pr.next] + tol)
            return false;
    return ergodic_inner_lp(graph, w) >= -tol;
}

double sup_over_K(const Graph& graph, StateIndex y0) {
    return solve_q_form(graph, y0, 0.0).value;
}

Projection project_to_W(const Graph& graph, const OccupationalMeasure& m,
                        const MetricBasis& basis, const lp::SolverOptions& options) {
    const auto G = graph.num_pairs();
    if (m.weights.size() != G || basis.num_pairs() != G)
        throw std::invalid_argument("measure, basis and graph disagree on |G|");
    const auto J = basis.size();
    LinearProgram lp(Sense::minimize);
    for (PairIndex p = 0; p < G; ++p)
        lp.add_variable(0.0, Bound::nonnegative, "gamma" + std::to_string(p));
    for (std::size_t j = 0; j < J; ++j)
        lp.add_variable(basis.weight(j), Bound::nonnegative, "s" + std::to_string(j));
    add_w_rows(lp, graph, 0);
    for (std::size_t j = 0; j < J; ++j) {
        const auto q = basis.function(j);
        const double target = m.integrate(q);
        std::vector<Entry> up{{G + j, 1.0}}, down{{G + j, 1.0}};
        for (PairIndex p = 0; p < G; ++p) {
            if (q[p] == 0.0)
                continue;
            up.emplace_back(p, q[p]);
            down.emplace_back(p, -q[p]);
        }
        // s_j + <q_j, gamma> >= <q_j, m> and s_j - <q_j, gamma> >= -<q_j, m>
        lp.add_row(up, RowType::greater_equal, target);
        lp.add_row(down, RowType::greater_equal, -target);
    }
    const auto sol = checked_solve(lp, options, "projection");
    Projection out;
    out.nearest.weights.assign(sol.primal.begin(), sol.primal.begin() + G);
    for (auto& v : out.nearest.weights)
        v = std::max(v, 0.0);
    out.distance = std::max(0.0, rho(m, out.nearest, basis));
    return out;
}

double certificate_slack(const Graph& graph, const DualCertificate& cert, StateIndex y0,
                         double theta) {
    check_state(graph, y0);
    if (cert.psi.size() != graph.num_states() || cert.eta.size() != graph.num_states())
        throw std::invalid_argument("certificate must be defined on every state");
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& pr : graph.pairs()) {
        slack = std::min(slack, pr.cost + cert.psi[y0] - cert.psi[pr.state] + cert.eta[pr.next] -
                                    cert.eta[pr.state] - cert.mu);
        slack = std::min(slack, cert.psi[pr.next] - cert.psi[pr.state] + theta);
    }
    return slack;
}

std::vector<double> omega_residuals(const Graph& graph, const PrimalPair& pair, StateIndex y0) {
    check_state(graph, y0);
    const auto G = graph.num_pairs();
    if (pair.gamma.weights.size() != G || pair.xi.weights.size() != G)
        throw std::invalid_argument("primal pair and graph disagree on |G|");
    std::vector<double> r(graph.num_states(), 0.0);
    r[y0] += pair.gamma.total();
    for (PairIndex p = 0; p < G; ++p) {
        const auto& pr = graph.pair(p);
        r[pr.state] -= pair.gamma.weights[p];
        r[pr.next] += pair.xi.weights[p];
        r[pr.state] -= pair.xi.weights[p];
    }
    return r;
}

PrimalPair primal_pair_from_process(const Graph& graph, const PeriodicProcess& process) {
    const auto P = process.cycle.steps();
    if (P == 0 || process.cycle.states.front() != process.cycle.states.back())
        throw NotPeriodic("cycle does not close");
    if (process.prefix.states.back() != process.cycle.states.front())
        throw NotPeriodic("prefix does not end at the cycle start");
    const auto G = graph.num_pairs();
    PrimalPair out{OccupationalMeasure{std::vector<double>(G, 0.0)},
                   FlowMeasure{std::vector<double>(G, 0.0)}};
    for (auto p : pair_sequence(graph, process.prefix))
        out.xi.weights[p] += 1.0;
    const auto cyc = pair_sequence(graph, process.cycle);
    const double per = static_cast<double>(P);
    for (std::size_t s = 0; s < P; ++s) {
        out.gamma.weights[cyc[s]] += 1.0 / per;
        out.xi.weights[cyc[s]] += static_cast<double>(P - 1 - s) / per;
    }
    return out;
}

} // namespace lra
