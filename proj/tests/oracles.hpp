#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's solvers; they only read the graph.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "lra/problem.hpp"

namespace oracle {

/// Minimum mean over all simple cycles reachable from y0, by exhaustive DFS.
inline double min_mean_simple_cycle(const lra::Graph& g, lra::StateIndex y0) {
    double best = std::numeric_limits<double>::infinity();
    const auto reach = g.reachable_from(y0);
    std::vector<char> on(g.num_states(), 0);
    for (auto root : reach) {
        // Cycles whose smallest state is `root`.
        std::function<void(lra::StateIndex, double, std::size_t)> dfs =
            [&](lra::StateIndex s, double cost, std::size_t len) {
                for (auto p : g.out_pairs(s)) {
                    const auto& pr = g.pair(p);
                    if (pr.next == root)
                        best = std::min(best, (cost + pr.cost) / static_cast<double>(len + 1));
                    else if (pr.next > root && !on[pr.next]) {
                        on[pr.next] = 1;
                        dfs(pr.next, cost + pr.cost, len + 1);
                        on[pr.next] = 0;
                    }
                }
            };
        on[root] = 1;
        dfs(root, 0.0, 0);
        on[root] = 0;
    }
    return best;
}

/// min over all action sequences of the T-step average cost, by enumeration.
inline double brute_force_average(const lra::Graph& g, lra::StateIndex y0, std::size_t T) {
    double best = std::numeric_limits<double>::infinity();
    std::function<void(lra::StateIndex, std::size_t, double)> go = [&](lra::StateIndex s,
                                                                       std::size_t t, double c) {
        if (t == T) {
            best = std::min(best, c);
            return;
        }
        for (auto p : g.out_pairs(s))
            go(g.pair(p).next, t + 1, c + g.pair(p).cost);
    };
    go(y0, 0, 0.0);
    return best / static_cast<double>(T);
}

/// Closed form of the averaged value of the toy system y' = u y, k = y.
inline double toy_value(double y0, std::size_t T) {
    if (y0 <= 0.0)
        return y0;
    return -y0 + 2.0 * y0 / static_cast<double>(T);
}

/// Optimum of min c^T x, A x = b, x >= 0 by enumerating every basis (tiny LPs only).
/// Returns +inf when infeasible. Unboundedness is not detected.
inline double vertex_enumeration(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b, const std::vector<double>& c) {
    const auto m = A.size(), n = c.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
        if (pick.size() == m) {
            std::vector<std::vector<double>> M(m, std::vector<double>(m + 1));
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t k = 0; k < m; ++k)
                    M[i][k] = A[i][pick[k]];
                M[i][m] = b[i];
            }
            for (std::size_t k = 0; k < m; ++k) {
                std::size_t piv = k;
                for (std::size_t i = k + 1; i < m; ++i)
                    if (std::abs(M[i][k]) > std::abs(M[piv][k]))
                        piv = i;
                if (std::abs(M[piv][k]) < 1e-10)
                    return;
                std::swap(M[k], M[piv]);
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == k)
                        continue;
                    const double f = M[i][k] / M[k][k];
                    for (std::size_t j = k; j <= m; ++j)
                        M[i][j] -= f * M[k][j];
                }
            }
            double obj = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double x = M[k][m] / M[k][k];
                if (x < -1e-9)
                    return;
                obj += c[pick[k]] * x;
            }
            best = std::min(best, obj);
            return;
        }
        for (std::size_t j = from; j < n; ++j) {
            pick.push_back(j);
            choose(j + 1);
            pick.pop_back();
        }
    };
    choose(0);
    return best;
}

} // namespace oracle
