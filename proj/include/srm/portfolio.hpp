#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "srm/distribution.hpp"
#include "srm/simplex.hpp"
#include "srm/spectrum.hpp"

namespace srm {

/// Scenario-based allocation problem: minimize R_sigma(x^T Y) over the
/// simplex { x : sum x = 1, lower <= x <= upper }.
///
/// Row s of losses is the loss per unit held of each asset in scenario s.
class ScenarioProblem {
public:
    /// Empty probs means equally likely scenarios; empty bounds mean [0,1].
    /// Probabilities must be positive and sum to 1 within 1e-9; they are
    /// renormalized. Throws std::invalid_argument on malformed input and
    /// SolverError if the bounds leave no feasible portfolio.
    static ScenarioProblem make(Eigen::MatrixXd losses, std::vector<double> probs, StepSpectrum spectrum,
                                std::vector<double> lower = {}, std::vector<double> upper = {});

    const Eigen::MatrixXd& losses() const noexcept { return losses_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    const StepSpectrum& spectrum() const noexcept { return spectrum_; }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    std::size_t assets() const noexcept { return static_cast<std::size_t>(losses_.cols()); }
    std::size_t scenarios() const noexcept { return static_cast<std::size_t>(losses_.rows()); }

    bool is_feasible(std::span<const double> x, double tol = 1e-8) const;

    /// Same data with another spectrum.
    ScenarioProblem with_spectrum(StepSpectrum spectrum) const;

private:
    ScenarioProblem(Eigen::MatrixXd losses, std::vector<double> probs, StepSpectrum spectrum,
                    std::vector<double> lower, std::vector<double> upper)
        : losses_(std::move(losses)), probs_(std::move(probs)), spectrum_(std::move(spectrum)),
          lower_(std::move(lower)), upper_(std::move(upper)) {}

    Eigen::MatrixXd losses_;
    std::vector<double> probs_;
    StepSpectrum spectrum_;
    std::vector<double> lower_;
    std::vector<double> upper_;
};

struct PortfolioSolution {
    std::vector<double> x;
    std::vector<double> q;            // one knot per Kusuoka atom above level 0
    std::vector<double> knot_levels;  // levels of those atoms
    double value = 0.0;               // optimal objective of the linear program
    std::size_t iterations = 0;
    double gap = 0.0;                 // |value - portfolio_risk(x)|
    bool upper_bound = false;         // spectrum is a discretization majorant
};

struct SolveOptions {
    /// Add q_1 <= ... <= q_n. Optimal knots are increasing quantiles, so
    /// the constraint never binds; it is off by default.
    bool order_knots = false;
    std::size_t max_iterations = 1'000'000;
};

/// Per-scenario portfolio losses x^T Y_s. Throws std::invalid_argument if x is infeasible.
std::vector<double> scenario_losses(const ScenarioProblem& p, std::span<const double> x);

EmpiricalDistribution loss_distribution(const ScenarioProblem& p, std::span<const double> x);

double portfolio_risk(const ScenarioProblem& p, std::span<const double> x);

/// Jointly minimizes q + E(x^T Y - q)_+ / (1 - alpha) over (x, q). The
/// problem's spectrum must be avar_spectrum(alpha).
PortfolioSolution minimize_avar(const ScenarioProblem& p, double alpha, const SolveOptions& opts = {});

/// Minimizes E f(x^T Y) over x and the knots of
///   f(y) = mu_0 y + sum_i mu_i (q_i + (y - q_i)_+ / (1 - alpha_i)),
/// where (alpha_i, mu_i) are the Kusuoka atoms of the spectrum. Hinges are
/// linearized with epigraph variables t_si >= x^T Y_s - q_i, t_si >= 0 and the
/// resulting linear program is solved by the dense simplex.
PortfolioSolution minimize_spectral(const ScenarioProblem& p, const SolveOptions& opts = {});

struct GridResult {
    std::vector<double> x;
    double value = 0.0;
};

/// Exhaustive search of portfolio_risk over the simplex lattice with spacing
/// step (first minimum wins). Supports at most three assets.
GridResult grid_search_oracle(const ScenarioProblem& p, double step);

}  // namespace srm
