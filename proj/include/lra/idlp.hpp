#pragma once

#include <vector>

#include "lra/dp.hpp"
#include "lra/occupation.hpp"
#include "lra/problem.hpp"
#include "lra/simplex.hpp"

namespace lra {

/// Dual triple (mu, psi, eta); psi and eta are indexed by state.
struct DualCertificate {
    double mu = 0.0;
    std::vector<double> psi;
    std::vector<double> eta;
};

/// Primal feasible point: a stationary measure gamma and a reachability flow xi.
struct PrimalPair {
    OccupationalMeasure gamma;
    FlowMeasure xi;
};

struct SolverStats {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t iterations = 0;
    bool bland_used = false;
    double kkt_residual = 0.0;
};

struct PrimalResult {
    double value = 0.0;
    PrimalPair pair;
    /// Shadow price of the flow cap <1, xi> <= |states| |G| (theta = 0 only).
    double cap_multiplier = 0.0;
    /// True when the cap multiplier is nonzero, i.e. the cap changed the optimum.
    bool cap_active = false;
    SolverStats stats;
};

struct DualResult {
    double value = 0.0;
    DualCertificate certificate;
    SolverStats stats;
};

/// Optimal (psi, eta) of the potential form: maximize psi(y0) subject to
/// k - psi(y) + eta(f) - eta(y) >= 0 and psi(f) - psi(y) >= -theta.
struct QFormResult {
    double value = 0.0;
    std::vector<double> psi;
    std::vector<double> eta;
    SolverStats stats;
};

struct PeriodicValue {
    double value = 0.0;
    PeriodicProcess process;
};

struct Projection {
    double distance = 0.0;
    OccupationalMeasure nearest;
};

/// k*(theta, y0): minimize <k, gamma> + theta <1, xi> over gamma in W and
/// (gamma, xi) balanced for reachability from y0. Throws PrimalInfeasible.
PrimalResult solve_primal(const Graph& graph, StateIndex y0, double theta = 0.0,
                          const lp::SolverOptions& options = {});

/// d*(theta, y0): maximize mu subject to
/// k + psi(y0) - psi(y) + eta(f) - eta(y) - mu >= 0 and psi(f) - psi(y) >= -theta.
/// Throws DualUnbounded.
DualResult solve_dual(const Graph& graph, StateIndex y0, double theta = 0.0,
                      const lp::SolverOptions& options = {});

QFormResult solve_q_form(const Graph& graph, StateIndex y0, double theta = 0.0,
                         const lp::SolverOptions& options = {});

/// min over gamma in W of <k - w(y), gamma>.
double ergodic_inner_lp(const Graph& graph, const ValueFunction& w,
                        const lp::SolverOptions& options = {});
/// sup over eta of min over G of { k - w(y) + eta(f) - eta(y) }; equals ergodic_inner_lp.
double ergodic_inner_dual(const Graph& graph, const ValueFunction& w,
                          const lp::SolverOptions& options = {});

/// Minimum mean cycle reachable from y0 (Karp), with a shortest prefix reaching it.
PeriodicValue v_per(const Graph& graph, StateIndex y0);

/// w nondecreasing along the dynamics (within tol) and ergodic_inner_lp(w) >= -tol.
bool k_membership(const Graph& graph, const ValueFunction& w, double tol = 1e-7);

/// sup { w(y0) : w in K }, computed as the theta = 0 potential-form LP.
double sup_over_K(const Graph& graph, StateIndex y0);

/// Nearest point of W in the truncated rho metric of `basis`.
Projection project_to_W(const Graph& graph, const OccupationalMeasure& m,
                        const MetricBasis& basis, const lp::SolverOptions& options = {});

/// Most negative constraint residual of the certificate at y0 (>= 0 when feasible).
double certificate_slack(const Graph& graph, const DualCertificate& cert, StateIndex y0,
                         double theta = 0.0);

/// Per-state residual 1{z = y0} - marginal_gamma(z) + inflow_xi(z) - outflow_xi(z).
std::vector<double> omega_residuals(const Graph& graph, const PrimalPair& pair, StateIndex y0);

/// Feasible primal pair built from a periodic process: gamma is the cycle's
/// occupational measure and xi carries unit flow along the prefix, then
/// decreasing flow around the cycle.
PrimalPair primal_pair_from_process(const Graph& graph, const PeriodicProcess& process);

} // namespace lra
