#include "lra/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace lra::lp {

const char* to_string(Status status) {
    switch (status) {
    case Status::optimal:
        return "optimal";
    case Status::infeasible:
        return "infeasible";
    case Status::unbounded:
        return "unbounded";
    }
    return "unknown";
}

std::size_t LinearProgram::add_variable(double cost, Bound bound, std::string name) {
    if (!rhs_.empty())
        throw std::logic_error("variables must be declared before rows");
    if (!std::isfinite(cost))
        throw std::invalid_argument("objective coefficients must be finite");
    if (name.empty())
        name = "x" + std::to_string(objective_.size());
    objective_.push_back(cost);
    bounds_.push_back(bound);
    var_names_.push_back(std::move(name));
    return objective_.size() - 1;
}

std::size_t LinearProgram::add_row(const std::vector<Entry>& entries, RowType type, double rhs,
                                   std::string name) {
    if (!std::isfinite(rhs))
        throw std::invalid_argument("right-hand sides must be finite");
    const auto n = num_vars();
    const auto base = matrix_.size();
    matrix_.resize(base + n, 0.0);
    for (const auto& [j, a] : entries) {
        if (j >= n)
            throw std::out_of_range("row references an undeclared variable");
        if (!std::isfinite(a))
            throw std::invalid_argument("matrix coefficients must be finite");
        matrix_[base + j] += a;
    }
    if (name.empty())
        name = "r" + std::to_string(rhs_.size());
    rhs_.push_back(rhs);
    row_types_.push_back(type);
    row_names_.push_back(std::move(name));
    return rhs_.size() - 1;
}

double KktResiduals::max() const {
    return std::max({primal_infeasibility, dual_infeasibility, complementarity, duality_gap});
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr std::size_t npos_ = static_cast<std::size_t>(-1);
constexpr std::size_t npos() { return npos_; }

// Solves M z = r (or M^T z = r) for dense square M by partial pivoting.
std::optional<std::vector<double>> dense_solve(std::vector<double> M, std::vector<double> r,
                                               std::size_t n, bool transpose) {
    if (transpose) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                std::swap(M[i * n + j], M[j * n + i]);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(M[i * n + k]) > std::abs(M[piv * n + k]))
                piv = i;
        if (std::abs(M[piv * n + k]) < 1e-13)
            return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(M[k * n + j], M[piv * n + j]);
            std::swap(r[k], r[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = M[i * n + k] / M[k * n + k];
            if (f == 0.0)
                continue;
            for (std::size_t j = k; j < n; ++j)
                M[i * n + j] -= f * M[k * n + j];
            r[i] -= f * r[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = r[k];
        for (std::size_t j = k + 1; j < n; ++j)
            s -= M[k * n + j] * r[j];
        r[k] = s / M[k * n + k];
    }
    return r;
}

class Tableau {
public:
    Tableau(const LinearProgram& lp, const SolverOptions& options);
    LpSolution run();

private:
    enum class Outcome { optimal, unbounded };

    double& at(std::size_t i, std::size_t j) { return T_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return T_[i * width_ + j]; }
    double& rhs(std::size_t i) { return T_[i * width_ + cols_]; }

    void price(const std::vector<double>& cost);
    void pivot(std::size_t r, std::size_t c);
    Outcome iterate(const std::vector<char>& allowed);
    void drive_out_artificials();
    void extract(LpSolution& out);

    const LinearProgram& lp_;
    SolverOptions opt_;
    std::size_t m_ = 0, cols_ = 0, width_ = 0, first_art_ = 0;
    std::vector<double> T_;      // m x (cols + 1), last column is the rhs
    std::vector<double> z_;      // reduced costs, last entry is -objective
    std::vector<double> A_;      // sign-adjusted equality-form columns, m x cols
    std::vector<double> b_;      // sign-adjusted rhs
    std::vector<double> cost2_;  // phase-2 cost per column
    std::vector<double> sign_;   // row multipliers applied to reach b >= 0
    std::vector<std::size_t> pos_, neg_;
    std::vector<std::size_t> basis_;
    std::size_t iterations_ = 0;
    bool bland_used_ = false;
};

Tableau::Tableau(const LinearProgram& lp, const SolverOptions& options) : lp_(lp), opt_(options) {
    m_ = lp.num_rows();
    const auto n = lp.num_vars();
    const double s_obj = lp.sense() == Sense::maximize ? -1.0 : 1.0;

    std::size_t cols = 0;
    pos_.resize(n);
    neg_.assign(n, npos());
    for (std::size_t j = 0; j < n; ++j) {
        pos_[j] = cols++;
        if (lp.bounds()[j] == Bound::free)
            neg_[j] = cols++;
    }
    std::vector<std::size_t> slack(m_, npos());
    std::vector<double> slack_coef(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        if (lp.row_types()[i] != RowType::equal) {
            slack[i] = cols++;
            slack_coef[i] = lp.row_types()[i] == RowType::less_equal ? 1.0 : -1.0;
        }
    }
    sign_.assign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const double b = lp.rhs()[i];
        if (b < 0.0 || (b == 0.0 && slack_coef[i] < 0.0))
            sign_[i] = -1.0;
    }
    // Rows whose slack enters with +1 start basic on the slack; others need an artificial.
    std::vector<std::size_t> art(m_, npos());
    first_art_ = cols;
    for (std::size_t i = 0; i < m_; ++i)
        if (!(slack[i] != npos() && sign_[i] * slack_coef[i] > 0.0))
            art[i] = cols++;
    cols_ = cols;
    width_ = cols_ + 1;

    A_.assign(m_ * cols_, 0.0);
    b_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double a = sign_[i] * lp.coefficient(i, j);
            A_[i * cols_ + pos_[j]] = a;
            if (neg_[j] != npos())
                A_[i * cols_ + neg_[j]] = -a;
        }
        if (slack[i] != npos())
            A_[i * cols_ + slack[i]] = sign_[i] * slack_coef[i];
        if (art[i] != npos())
            A_[i * cols_ + art[i]] = 1.0;
        b_[i] = sign_[i] * lp.rhs()[i];
    }
    cost2_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cost2_[pos_[j]] = s_obj * lp.objective()[j];
        if (neg_[j] != npos())
            cost2_[neg_[j]] = -s_obj * lp.objective()[j];
    }

    T_.assign(m_ * width_, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        std::copy_n(A_.begin() + i * cols_, cols_, T_.begin() + i * width_);
        rhs(i) = b_[i];
        basis_[i] = art[i] != npos() ? art[i] : slack[i];
    }
}

void Tableau::price(const std::vector<double>& cost) {
    z_.assign(width_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j)
        z_[j] = cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0)
            continue;
        for (std::size_t j = 0; j < width_; ++j)
            z_[j] -= cb * at(i, j);
    }
}

void Tableau::pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / at(r, c);
    for (std::size_t j = 0; j < width_; ++j)
        at(r, j) *= inv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (i == r)
            continue;
        const double f = at(i, c);
        if (f == 0.0)
            continue;
        double* row = &T_[i * width_];
        const double* prow = &T_[r * width_];
        for (std::size_t j = 0; j < width_; ++j)
            row[j] -= f * prow[j];
        row[c] = 0.0;
    }
    const double f = z_[c];
    if (f != 0.0) {
        for (std::size_t j = 0; j < width_; ++j)
            z_[j] -= f * at(r, j);
        z_[c] = 0.0;
    }
    basis_[r] = c;
}

Tableau::Outcome Tableau::iterate(const std::vector<char>& allowed) {
    const double tol = opt_.feas_tol;
    bool bland = false;
    std::size_t stall = 0;
    double best = -z_[cols_];
    for (;;) {
        std::size_t enter = npos();
        if (bland) {
            for (std::size_t j = 0; j < cols_; ++j)
                if (allowed[j] && z_[j] < -tol) {
                    enter = j;
                    break;
                }
        } else {
            double most = -tol;
            for (std::size_t j = 0; j < cols_; ++j)
                if (allowed[j] && z_[j] < most) {
                    most = z_[j];
                    enter = j;
                }
        }
        if (enter == npos())
            return Outcome::optimal;

        std::size_t leave = npos();
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            const double a = at(i, enter);
            if (a <= kPivotTol)
                continue;
            const double r = std::max(0.0, T_[i * width_ + cols_]) / a;
            if (leave == npos() || r < ratio - 1e-12) {
                ratio = r;
                leave = i;
            } else if (r <= ratio + 1e-12) {
                const bool better = bland ? basis_[i] < basis_[leave]
                                          : a > at(leave, enter);
                if (better) {
                    ratio = std::min(ratio, r);
                    leave = i;
                }
            }
        }
        if (leave == npos())
            return Outcome::unbounded;

        pivot(leave, enter);
        if (++iterations_ > opt_.max_iters)
            throw IterationLimit("simplex exceeded " + std::to_string(opt_.max_iters) +
                                 " iterations");
        const double obj = -z_[cols_];
        if (obj < best - 1e-12 * (1.0 + std::abs(best))) {
            best = obj;
            stall = 0;
        } else if (!bland && ++stall > 2 * m_) {
            bland = true;
            bland_used_ = true;
        }
    }
}

void Tableau::drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] < first_art_)
            continue;
        std::size_t best = npos();
        double mag = kPivotTol;
        for (std::size_t j = 0; j < first_art_; ++j)
            if (std::abs(at(i, j)) > mag) {
                mag = std::abs(at(i, j));
                best = j;
            }
        if (best != npos()) {
            pivot(i, best);
            ++iterations_;
        } else {
            // Redundant row: the artificial stays basic at level zero.
            rhs(i) = 0.0;
        }
    }
}

void Tableau::extract(LpSolution& out) {
    const auto n = lp_.num_vars();
    std::vector<double> x(cols_, 0.0);
    std::vector<double> B(m_ * m_, 0.0), cb(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t k = 0; k < m_; ++k)
            B[k * m_ + i] = A_[k * cols_ + basis_[i]];
        cb[i] = cost2_[basis_[i]];
    }
    auto xb = dense_solve(B, b_, m_, false);
    auto y = dense_solve(B, cb, m_, true);
    for (std::size_t i = 0; i < m_; ++i)
        x[basis_[i]] = xb ? (*xb)[i] : T_[i * width_ + cols_];
    for (auto& v : x)
        if (v < 0.0 && v > -opt_.feas_tol)
            v = 0.0;
    if (!y)
        throw std::runtime_error("simplex basis became singular");

    const double s_obj = lp_.sense() == Sense::maximize ? -1.0 : 1.0;
    out.primal.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        out.primal[j] = x[pos_[j]] - (neg_[j] != npos() ? x[neg_[j]] : 0.0) + 0.0;
    out.dual.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
        out.dual[i] = s_obj * sign_[i] * (*y)[i] + 0.0; // no negative zeros
    out.objective_value = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        out.objective_value += lp_.objective()[j] * out.primal[j];
    out.reduced_costs.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = lp_.objective()[j];
        for (std::size_t i = 0; i < m_; ++i)
            d -= lp_.coefficient(i, j) * out.dual[i];
        out.reduced_costs[j] = d;
    }
}

LpSolution Tableau::run() {
    LpSolution out;
    std::vector<double> cost1(cols_, 0.0);
    for (std::size_t j = first_art_; j < cols_; ++j)
        cost1[j] = 1.0;
    std::vector<char> allowed(cols_, 1);

    if (first_art_ < cols_) {
        price(cost1);
        iterate(allowed);
        out.phase1_objective = std::max(0.0, -z_[cols_]);
        double bmax = 1.0;
        for (double b : b_)
            bmax = std::max(bmax, std::abs(b));
        if (out.phase1_objective > opt_.feas_tol * bmax) {
            out.status = Status::infeasible;
            out.iterations = iterations_;
            out.bland_used = bland_used_;
            return out;
        }
        drive_out_artificials();
        for (std::size_t j = first_art_; j < cols_; ++j)
            allowed[j] = 0;
    }

    price(cost2_);
    const auto outcome = iterate(allowed);
    out.iterations = iterations_;
    out.bland_used = bland_used_;
    if (outcome == Outcome::unbounded) {
        out.status = Status::unbounded;
        return out;
    }
    out.status = Status::optimal;
    extract(out);
    return out;
}

} // namespace

LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
    if (lp.num_vars() == 0)
        throw std::invalid_argument("linear program has no variables");
    Tableau tableau(lp, options);
    return tableau.run();
}

KktResiduals kkt_residuals(const LinearProgram& lp, const LpSolution& sol) {
    KktResiduals r;
    if (sol.status != Status::optimal)
        return r;
    const auto n = lp.num_vars();
    const auto m = lp.num_rows();
    // Signs below are for minimization; a maximization flips dual feasibility.
    const double s = lp.sense() == Sense::maximize ? -1.0 : 1.0;
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            ax += lp.coefficient(i, j) * sol.primal[j];
        const double slack = ax - lp.rhs()[i];
        const double y = s * sol.dual[i];
        switch (lp.row_types()[i]) {
        case RowType::equal:
            r.primal_infeasibility = std::max(r.primal_infeasibility, std::abs(slack));
            break;
        case RowType::less_equal:
            r.primal_infeasibility = std::max(r.primal_infeasibility, std::max(0.0, slack));
            r.dual_infeasibility = std::max(r.dual_infeasibility, std::max(0.0, y));
            break;
        case RowType::greater_equal:
            r.primal_infeasibility = std::max(r.primal_infeasibility, std::max(0.0, -slack));
            r.dual_infeasibility = std::max(r.dual_infeasibility, std::max(0.0, -y));
            break;
        }
        r.complementarity = std::max(r.complementarity, std::abs(sol.dual[i] * slack));
        dual_obj += lp.rhs()[i] * sol.dual[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double d = s * sol.reduced_costs[j];
        if (lp.bounds()[j] == Bound::nonnegative) {
            r.primal_infeasibility = std::max(r.primal_infeasibility, std::max(0.0, -sol.primal[j]));
            r.dual_infeasibility = std::max(r.dual_infeasibility, std::max(0.0, -d));
            r.complementarity = std::max(r.complementarity, std::abs(sol.primal[j] * d));
        } else {
            r.dual_infeasibility = std::max(r.dual_infeasibility, std::abs(d));
        }
    }
    r.duality_gap = std::abs(sol.objective_value - dual_obj);
    return r;
}

void write_lp(std::ostream& os, const LinearProgram& lp) {
    auto row_type = [](RowType t) {
        switch (t) {
        case RowType::equal:
            return "=";
        case RowType::less_equal:
            return "<=";
        case RowType::greater_equal:
            return ">=";
        }
        return "?";
    };
    os << "sense " << (lp.sense() == Sense::minimize ? "minimize" : "maximize") << '\n';
    os << "vars " << lp.num_vars() << '\n';
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        os << "var " << j << ' ' << lp.var_name(j) << ' '
           << (lp.bounds()[j] == Bound::free ? "free" : "nonneg") << " cost "
           << lp.objective()[j] << '\n';
    os << "rows " << lp.num_rows() << '\n';
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        os << "row " << i << ' ' << lp.row_name(i) << ' ' << row_type(lp.row_types()[i])
           << " rhs " << lp.rhs()[i] << " :";
        for (std::size_t j = 0; j < lp.num_vars(); ++j)
            if (lp.coefficient(i, j) != 0.0)
                os << ' ' << j << ':' << lp.coefficient(i, j);
        os << '\n';
    }
}

} // namespace lra::lp
