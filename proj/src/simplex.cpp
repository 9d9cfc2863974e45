#include "srm/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace srm::lp {
namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
constexpr std::size_t kDegenerateRun = 50;
// Dense tableau guard: 64M doubles = 512 MiB.
constexpr double kMaxEntries = 64.0 * 1024 * 1024;

class TableauSolver {
    using Index = Eigen::Index;

public:
    TableauSolver(Tableau t, std::vector<std::size_t> basis, std::vector<bool> allowed)
        : t_(std::move(t)), basis_(std::move(basis)), allowed_(std::move(allowed)) {}

    Tableau& tableau() { return t_; }
    std::vector<std::size_t>& basis() { return basis_; }
    std::vector<bool>& allowed() { return allowed_; }

    Index rows() const { return t_.rows() - 1; }
    Index cols() const { return t_.cols() - 1; }

    // Objective row holds reduced costs; its rhs entry is -objective.
    void price(const std::vector<double>& cost) {
        const Index m = rows();
        const Index n = cols();
        for (Index j = 0; j < n; ++j) t_(m, j) = cost[static_cast<std::size_t>(j)];
        t_(m, n) = 0.0;
        for (Index i = 0; i < m; ++i) {
            const double cb = cost[basis_[static_cast<std::size_t>(i)]];
            if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
        }
    }

    void pivot(Index r, Index s) {
        t_.row(r) /= t_(r, s);
        Eigen::VectorXd col = t_.col(s);
        col(r) = 0.0;
        t_.noalias() -= col * t_.row(r);
        t_(r, s) = 1.0;
        for (Index i = 0; i <= rows(); ++i) {
            if (i != r) t_(i, s) = 0.0;
        }
        basis_[static_cast<std::size_t>(r)] = static_cast<std::size_t>(s);
    }

    Status run(std::size_t max_iterations, std::size_t& iterations) {
        const Index m = rows();
        const Index n = cols();
        std::size_t degenerate = 0;
        while (iterations < max_iterations) {
            const bool bland = degenerate >= kDegenerateRun;
            Index enter = -1;
            double best = -kCostTol;
            for (Index j = 0; j < n; ++j) {
                if (!allowed_[static_cast<std::size_t>(j)]) continue;
                const double rc = t_(m, j);
                if (rc < best) {
                    enter = j;
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter < 0) return Status::Optimal;

            Index leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                const double a = t_(i, enter);
                if (a <= kPivotTol) continue;
                const double r = t_(i, n) / a;
                if (r < ratio - 1e-12 ||
                    (r <= ratio + 1e-12 && leave >= 0 &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    ratio = std::min(ratio, r);
                    leave = i;
                }
            }
            if (leave < 0) return Status::Unbounded;

            degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
            pivot(leave, enter);
            ++iterations;
        }
        return Status::IterationLimit;
    }

private:
    Tableau t_;
    std::vector<std::size_t> basis_;
    std::vector<bool> allowed_;
};

}  // namespace

const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration limit";
    }
    return "unknown";
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> coefs, Sense sense, double rhs) {
    for (const auto& [j, a] : coefs) {
        if (j >= cost_.size()) throw std::out_of_range("add_row: variable index " + std::to_string(j));
        (void)a;
    }
    rows_.push_back({std::move(coefs), sense, rhs});
}

Solution LinearProgram::solve(std::size_t max_iterations) const {
    using Index = Eigen::Index;
    const std::size_t n = cost_.size();
    const std::size_t m = rows_.size();

    // Normalize every row to rhs >= 0 and note which structural columns are
    // singletons (nonzero in exactly one row); those can start in the basis.
    std::vector<Sense> sense(m);
    std::vector<double> sign(m, 1.0);
    std::vector<std::size_t> occurrences(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
        sense[i] = rows_[i].sense;
        if (rows_[i].rhs < 0.0) {
            sign[i] = -1.0;
            if (sense[i] == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
            else if (sense[i] == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
        }
        for (const auto& [j, a] : rows_[i].coefs) {
            if (a != 0.0) ++occurrences[j];
        }
    }

    std::size_t n_slack = 0;
    for (auto s : sense) n_slack += s != Sense::Equal ? 1 : 0;

    // Pick a starting basic column per row: a slack for <= rows, otherwise a
    // positive singleton structural column, otherwise an artificial.
    std::vector<std::ptrdiff_t> crash(m, -1);
    std::vector<bool> used(n, false);
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (sense[i] == Sense::LessEqual) continue;
        for (const auto& [j, a] : rows_[i].coefs) {
            if (!used[j] && occurrences[j] == 1 && sign[i] * a > 0.0) {
                crash[i] = static_cast<std::ptrdiff_t>(j);
                used[j] = true;
                break;
            }
        }
        if (crash[i] < 0) ++n_art;
    }

    const std::size_t total = n + n_slack + n_art;
    if (static_cast<double>(m + 1) * static_cast<double>(total + 1) > kMaxEntries) {
        throw SolverError("linear program too large for the dense simplex (" + std::to_string(m) + " rows, " +
                          std::to_string(total) + " columns)");
    }

    Tableau t = Tableau::Zero(static_cast<Index>(m + 1), static_cast<Index>(total + 1));
    std::vector<std::size_t> basis(m);
    std::vector<double> phase1(total, 0.0);
    std::size_t slack = n;
    std::size_t art = n + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = static_cast<Index>(i);
        for (const auto& [j, a] : rows_[i].coefs) t(r, static_cast<Index>(j)) += sign[i] * a;
        t(r, static_cast<Index>(total)) = sign[i] * rows_[i].rhs;
        if (sense[i] == Sense::LessEqual) {
            t(r, static_cast<Index>(slack)) = 1.0;
            basis[i] = slack++;
            continue;
        }
        if (sense[i] == Sense::GreaterEqual) t(r, static_cast<Index>(slack++)) = -1.0;
        if (crash[i] >= 0) {
            const auto j = static_cast<Index>(crash[i]);
            t.row(r) /= t(r, j);
            basis[i] = static_cast<std::size_t>(crash[i]);
        } else {
            t(r, static_cast<Index>(art)) = 1.0;
            phase1[art] = 1.0;
            basis[i] = art++;
        }
    }

    Solution sol;
    std::vector<bool> allowed(total, true);
    TableauSolver solver(std::move(t), std::move(basis), allowed);

    if (n_art > 0) {
        solver.price(phase1);
        const Status st = solver.run(max_iterations, sol.iterations);
        if (st == Status::IterationLimit) {
            sol.status = st;
            return sol;
        }
        double scale = 1.0;
        for (const auto& row : rows_) scale = std::max(scale, std::abs(row.rhs));
        const double infeasibility = -solver.tableau()(static_cast<Index>(m), static_cast<Index>(total));
        if (infeasibility > 1e-9 * scale) {
            sol.status = Status::Infeasible;
            return sol;
        }
        // Drive remaining artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (solver.basis()[i] < n + n_slack) continue;
            for (std::size_t j = 0; j < n + n_slack; ++j) {
                if (std::abs(solver.tableau()(static_cast<Index>(i), static_cast<Index>(j))) > kPivotTol) {
                    solver.pivot(static_cast<Index>(i), static_cast<Index>(j));
                    break;
                }
            }
        }
        for (std::size_t j = n + n_slack; j < total; ++j) solver.allowed()[j] = false;
    }

    std::vector<double> phase2(total, 0.0);
    std::copy(cost_.begin(), cost_.end(), phase2.begin());
    solver.price(phase2);
    sol.status = solver.run(max_iterations, sol.iterations);
    if (sol.status != Status::Optimal) return sol;

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t b = solver.basis()[i];
        if (b < n) sol.x[b] = std::max(0.0, solver.tableau()(static_cast<Index>(i), static_cast<Index>(total)));
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += cost_[j] * sol.x[j];
    return sol;
}

}  // namespace srm::lp
