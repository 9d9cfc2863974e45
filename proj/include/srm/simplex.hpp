#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace srm {

/// Raised when an optimization problem is infeasible or the solver cannot
/// finish; the CLI maps it to exit code 2.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s) noexcept;

struct Solution {
    Status status = Status::IterationLimit;
    std::vector<double> x;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// minimize c^T x  subject to  rows,  x >= 0.
///
/// Solved with a dense two-phase tableau simplex. Entering columns follow
/// Dantzig's rule with lowest-index tie-breaking; after a run of degenerate
/// pivots the solver switches to Bland's rule until progress resumes, which
/// rules out cycling. Runs are deterministic.
class LinearProgram {
public:
    explicit LinearProgram(std::size_t n_vars) : cost_(n_vars, 0.0) {}

    std::size_t variables() const noexcept { return cost_.size(); }
    std::size_t rows() const noexcept { return rows_.size(); }

    void set_cost(std::size_t var, double c) { cost_.at(var) = c; }

    /// Sparse row: (variable index, coefficient) pairs.
    void add_row(std::vector<std::pair<std::size_t, double>> coefs, Sense sense, double rhs);

    Solution solve(std::size_t max_iterations = 1'000'000) const;

private:
    struct Row {
        std::vector<std::pair<std::size_t, double>> coefs;
        Sense sense;
        double rhs;
    };

    std::vector<double> cost_;
    std::vector<Row> rows_;
};

}  // namespace lp
}  // namespace srm
