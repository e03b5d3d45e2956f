#pragma once

#include <vector>

#include "lra/dp.hpp"
#include "lra/idlp.hpp"
#include "lra/problem.hpp"

namespace lra {

/// Residuals of the two optimality equalities at one step of a process:
/// value = k - psi(y) + eta(f) - eta(y) - (V(y0) - psi(y0)),
/// level = psi(y) - psi(y0).
struct StepResidual {
    std::size_t t = 0;
    double value = 0.0;
    double level = 0.0;
    bool on_cycle = false;
};

/// Per-step residuals for every recorded step of `trajectory`.
std::vector<StepResidual> condition_residuals(const Graph& graph, const Trajectory& trajectory,
                                              const DualCertificate& cert, double value_y0,
                                              StateIndex y0);

/// True iff both equalities hold within tol at every recorded step. Throws
/// InfeasibleCertificate when the certificate violates its constraints at y0
/// by more than tol.
bool check_sufficient(const Graph& graph, const Trajectory& trajectory,
                      const DualCertificate& cert, const ValueFunction& V, StateIndex y0,
                      double tol = 1e-7);

struct NecessityReport {
    double mean_cycle_cost = 0.0;
    double value = 0.0;
    /// Mean cycle cost equals V(y0) within tol.
    bool optimal = false;
    /// Only meaningful when optimal: every required equality holds.
    bool conditions_hold = false;
    /// An optimal process violated a required equality.
    bool inconsistency = false;
    std::vector<StepResidual> steps;
};

/// Checks the necessary conditions on prefix + one lap of the cycle. On the
/// cycle both equalities are required; on the prefix only the level equality
/// is (the value equality is reported but not required there, since the
/// prefix carries no stationary mass). Throws NotPeriodic.
NecessityReport check_necessary_periodic(const Graph& graph, const PeriodicProcess& process,
                                         const DualCertificate& cert, const ValueFunction& V,
                                         StateIndex y0, double tol = 1e-7);

/// u(y) = argmin_u { k(y,u) + eta(f(y,u)) }, lowest action on ties.
std::vector<ActionIndex> extract_feedback(const Graph& graph, const std::vector<double>& eta);

/// |(1/T)(eta(y(T)) - eta(y0)) - (V(y0) - (1/T) sum_{t<T} k)| over the first T steps.
double cost_gap_identity(const Graph& graph, const Trajectory& trajectory,
                         const std::vector<double>& eta, const ValueFunction& V, StateIndex y0,
                         std::size_t T);

} // namespace lra
