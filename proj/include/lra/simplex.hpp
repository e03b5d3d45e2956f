#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lra/errors.hpp"

namespace lra::lp {

enum class Sense { minimize, maximize };
enum class RowType { equal, less_equal, greater_equal };
enum class Bound { nonnegative, free };
enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status status);

using Entry = std::pair<std::size_t, double>;

/// Dense linear program: optimize c^T x subject to row constraints a_i^T x (=, <=, >=) b_i,
/// with each variable either nonnegative or free. All variables must be declared
/// before the first row.
class LinearProgram {
public:
    explicit LinearProgram(Sense sense = Sense::minimize) : sense_(sense) {}

    std::size_t add_variable(double cost, Bound bound = Bound::nonnegative, std::string name = {});
    std::size_t add_row(const std::vector<Entry>& entries, RowType type, double rhs,
                        std::string name = {});
    void set_cost(std::size_t var, double cost) { objective_.at(var) = cost; }

    Sense sense() const noexcept { return sense_; }
    std::size_t num_vars() const noexcept { return objective_.size(); }
    std::size_t num_rows() const noexcept { return rhs_.size(); }
    const std::vector<double>& objective() const noexcept { return objective_; }
    /// Row-major num_rows x num_vars.
    const std::vector<double>& matrix() const noexcept { return matrix_; }
    double coefficient(std::size_t row, std::size_t var) const {
        return matrix_[row * num_vars() + var];
    }
    const std::vector<double>& rhs() const noexcept { return rhs_; }
    const std::vector<RowType>& row_types() const noexcept { return row_types_; }
    const std::vector<Bound>& bounds() const noexcept { return bounds_; }
    const std::string& var_name(std::size_t j) const { return var_names_.at(j); }
    const std::string& row_name(std::size_t i) const { return row_names_.at(i); }

private:
    Sense sense_;
    std::vector<double> objective_;
    std::vector<Bound> bounds_;
    std::vector<std::string> var_names_;
    std::vector<double> matrix_;
    std::vector<double> rhs_;
    std::vector<RowType> row_types_;
    std::vector<std::string> row_names_;
};

struct SolverOptions {
    double feas_tol = 1e-9;
    double duality_tol = 1e-8;
    std::size_t max_iters = 200000;
};

/// Result of a solve. `dual[i]` is the sensitivity of the optimal objective to
/// rhs[i] (for either sense); `reduced_costs[j] = c_j - a_j^T dual`.
struct LpSolution {
    Status status = Status::infeasible;
    double objective_value = 0.0;
    std::vector<double> primal;
    std::vector<double> dual;
    std::vector<double> reduced_costs;
    std::size_t iterations = 0;
    double phase1_objective = 0.0;
    bool bland_used = false;
};

/// Two-phase primal simplex on a dense tableau. Dantzig pricing; switches to
/// Bland's rule after 2 * rows pivots without objective progress. Throws
/// IterationLimit after `max_iters` pivots.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

struct KktResiduals {
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double complementarity = 0.0;
    double duality_gap = 0.0;

    double max() const;
};

/// Optimality residuals of an optimal solution against the original LP.
KktResiduals kkt_residuals(const LinearProgram& lp, const LpSolution& solution);

/// Plain-text listing of the LP, one line per variable and per row.
void write_lp(std::ostream& os, const LinearProgram& lp);

} // namespace lra::lp
