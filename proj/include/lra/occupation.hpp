#pragma once

#include <span>
#include <vector>

#include "lra/dp.hpp"
#include "lra/problem.hpp"

namespace lra {

/// Probability weights over G in canonical pair order.
struct OccupationalMeasure {
    std::vector<double> weights;

    double total() const;
    /// Integral of a function given by its values on G.
    double integrate(std::span<const double> q) const;
};

/// Nonnegative, unnormalized weights over G (the reachability flow).
struct FlowMeasure {
    std::vector<double> weights;

    double total() const;
};

/// Point mass on one pair.
OccupationalMeasure dirac(const Graph& graph, PairIndex p);

/// Finite family q_1..q_J of functions on G with |q_j| <= 1, weighted 2^-j in rho.
class MetricBasis {
public:
    /// values[j][p] = q_{j+1} evaluated at pair p.
    explicit MetricBasis(std::vector<std::vector<double>> values);

    /// Tensor Chebyshev polynomials of the state coordinates (rescaled to the
    /// grid's bounding box) times an optional action indicator, ordered by total
    /// degree, then multi-index, then factor (none, action 0, action 1, ...).
    static MetricBasis chebyshev(const Graph& graph, std::size_t J = 64);

    std::size_t size() const noexcept { return values_.size(); }
    std::size_t num_pairs() const noexcept { return values_.empty() ? 0 : values_[0].size(); }
    std::span<const double> function(std::size_t j) const { return values_.at(j); }
    /// 2^-(j+1) for the zero-based index j.
    double weight(std::size_t j) const;

private:
    std::vector<std::vector<double>> values_;
};

/// Cesaro occupational measure of the first S steps.
OccupationalMeasure occupational_measure(const Graph& graph, const Trajectory& trajectory,
                                         std::size_t S);

/// Discounted occupational measure (1-alpha) sum alpha^t 1{(y(t),u(t)) = p}.
/// The recorded trajectory is extended periodically from its earliest detected
/// cycle and the tail is summed in closed form. Without a cycle the tail mass
/// alpha^S is charged to the last recorded pair when it is at most `tail_tol`;
/// otherwise NoCycleDetected is thrown.
OccupationalMeasure discounted_occupational_measure(const Graph& graph,
                                                    const Trajectory& trajectory, double alpha,
                                                    double tail_tol = 1e-12);

double rho(const OccupationalMeasure& m1, const OccupationalMeasure& m2,
           const MetricBasis& basis);

/// Hausdorff semi-metric between two finite sets of measures. Throws EmptySet.
double hausdorff(std::span<const OccupationalMeasure> set1,
                 std::span<const OccupationalMeasure> set2, const MetricBasis& basis);

/// Per-state flow imbalance inflow(z) - outflow(z) of a measure on G.
std::vector<double> w_residuals(const Graph& graph, std::span<const double> weights);

/// Per-state residual alpha inflow(z) - marginal(z) + (1-alpha) 1{z = y0} mass.
std::vector<double> w_alpha_residuals(const Graph& graph, std::span<const double> weights,
                                      double alpha, StateIndex y0);

/// Membership in the stationary polytope W.
bool membership_W(const Graph& graph, const OccupationalMeasure& m, double tol = 1e-9);

/// Membership in W(alpha, y0), the closed convex hull of the discounted
/// occupational measures of processes started at y0.
bool membership_W_alpha(const Graph& graph, const OccupationalMeasure& m, double alpha,
                        StateIndex y0, double tol = 1e-9);

} // namespace lra
