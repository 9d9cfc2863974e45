#include "srm/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "srm/risk.hpp"

namespace srm {

ScenarioProblem ScenarioProblem::make(Eigen::MatrixXd losses, std::vector<double> probs, StepSpectrum spectrum,
                                      std::vector<double> lower, std::vector<double> upper) {
    const auto S = static_cast<std::size_t>(losses.rows());
    const auto d = static_cast<std::size_t>(losses.cols());
    if (S == 0 || d == 0) throw std::invalid_argument("scenario problem: empty loss matrix");
    if (!losses.allFinite()) throw std::invalid_argument("scenario problem: non-finite loss entry");

    if (probs.empty()) probs.assign(S, 1.0 / static_cast<double>(S));
    if (probs.size() != S) {
        throw std::invalid_argument("scenario problem: " + std::to_string(S) + " scenarios but " +
                                    std::to_string(probs.size()) + " probabilities");
    }
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
        if (!(probs[s] > 0.0) || !std::isfinite(probs[s])) {
            throw std::invalid_argument("scenario problem: probability of scenario " + std::to_string(s) +
                                        " must be positive");
        }
        total += probs[s];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("scenario problem: probabilities sum to " + std::to_string(total));
    }
    for (auto& p : probs) p /= total;

    if (lower.empty()) lower.assign(d, 0.0);
    if (upper.empty()) upper.assign(d, 1.0);
    if (lower.size() != d || upper.size() != d) {
        throw std::invalid_argument("scenario problem: bounds must have one entry per asset");
    }
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        if (!(lower[j] >= 0.0 && upper[j] <= 1.0)) {
            throw std::invalid_argument("scenario problem: bounds of asset " + std::to_string(j) +
                                        " must lie within [0,1]");
        }
        if (lower[j] > upper[j]) {
            throw SolverError("infeasible bounds: lower > upper for asset " + std::to_string(j));
        }
        lo += lower[j];
        hi += upper[j];
    }
    if (lo > 1.0 + 1e-12 || hi < 1.0 - 1e-12) {
        throw SolverError("infeasible bounds: need sum(lower) <= 1 <= sum(upper), got " + std::to_string(lo) +
                          " and " + std::to_string(hi));
    }
    return ScenarioProblem(std::move(losses), std::move(probs), std::move(spectrum), std::move(lower),
                           std::move(upper));
}

bool ScenarioProblem::is_feasible(std::span<const double> x, double tol) const {
    if (x.size() != assets()) return false;
    double total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower_[j] - tol && x[j] <= upper_[j] + tol)) return false;
        total += x[j];
    }
    return std::abs(total - 1.0) <= tol;
}

ScenarioProblem ScenarioProblem::with_spectrum(StepSpectrum spectrum) const {
    return ScenarioProblem(losses_, probs_, std::move(spectrum), lower_, upper_);
}

std::vector<double> scenario_losses(const ScenarioProblem& p, std::span<const double> x) {
    if (!p.is_feasible(x)) throw std::invalid_argument("portfolio weights are not feasible");
    const Eigen::Map<const Eigen::VectorXd> w(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd l = p.losses() * w;
    return {l.data(), l.data() + l.size()};
}

EmpiricalDistribution loss_distribution(const ScenarioProblem& p, std::span<const double> x) {
    const auto l = scenario_losses(p, x);
    return EmpiricalDistribution::from_samples(l, std::span<const double>(p.probs()));
}

double portfolio_risk(const ScenarioProblem& p, std::span<const double> x) {
    return spectral_risk(loss_distribution(p, x), p.spectrum());
}

namespace {

struct Knot {
    double level;
    double mass;
};

// Builds and solves
//   min  base * E[x^T Y] + sum_i mass_i (q_i + E t_i / (1 - level_i))
//   s.t. t_si >= x^T Y_s - q_i,  t_si >= 0,  x feasible.
// Variables are shifted to be nonnegative: x = lower + x', q = Lmin + q',
// where Lmin is the smallest loss entry (optimal knots are loss quantiles).
PortfolioSolution solve_ansatz(const ScenarioProblem& p, double base, const std::vector<Knot>& knots,
                               const SolveOptions& opts) {
    const std::size_t d = p.assets();
    const std::size_t S = p.scenarios();
    const std::size_t n = knots.size();
    const Eigen::MatrixXd& Y = p.losses();
    const auto& probs = p.probs();
    const double floor = Y.minCoeff();

    const std::size_t q0 = d;
    const std::size_t t0 = d + n;
    lp::LinearProgram prog(d + n + S * n);

    const Eigen::Map<const Eigen::VectorXd> lower(p.lower().data(), static_cast<Eigen::Index>(d));
    const Eigen::Map<const Eigen::VectorXd> pw(probs.data(), static_cast<Eigen::Index>(S));
    const Eigen::VectorXd mean_loss = Y.transpose() * pw;
    const Eigen::VectorXd lower_loss = Y * lower;

    double constant = base * mean_loss.dot(lower);
    for (std::size_t j = 0; j < d; ++j) prog.set_cost(j, base * mean_loss(static_cast<Eigen::Index>(j)));
    for (std::size_t i = 0; i < n; ++i) {
        constant += knots[i].mass * floor;
        prog.set_cost(q0 + i, knots[i].mass);
        const double tail = knots[i].mass / (1.0 - knots[i].level);
        for (std::size_t s = 0; s < S; ++s) prog.set_cost(t0 + i * S + s, tail * probs[s]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < S; ++s) {
            std::vector<std::pair<std::size_t, double>> row;
            row.reserve(d + 2);
            for (std::size_t j = 0; j < d; ++j) {
                const double y = Y(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
                if (y != 0.0) row.emplace_back(j, y);
            }
            row.emplace_back(q0 + i, -1.0);
            row.emplace_back(t0 + i * S + s, -1.0);
            prog.add_row(std::move(row), lp::Sense::LessEqual, floor - lower_loss(static_cast<Eigen::Index>(s)));
        }
    }

    const double budget = 1.0 - std::accumulate(p.lower().begin(), p.lower().end(), 0.0);
    {
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t j = 0; j < d; ++j) row.emplace_back(j, 1.0);
        prog.add_row(std::move(row), lp::Sense::Equal, std::max(0.0, budget));
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double room = p.upper()[j] - p.lower()[j];
        if (room < budget) prog.add_row({{j, 1.0}}, lp::Sense::LessEqual, room);
    }
    if (opts.order_knots) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            prog.add_row({{q0 + i, 1.0}, {q0 + i + 1, -1.0}}, lp::Sense::LessEqual, 0.0);
        }
    }

    const lp::Solution sol = prog.solve(opts.max_iterations);
    switch (sol.status) {
        case lp::Status::Optimal: break;
        case lp::Status::Infeasible: throw SolverError("portfolio linear program is infeasible");
        case lp::Status::Unbounded:
            // x lies in a bounded simplex and the objective is bounded below on it.
            throw std::logic_error("portfolio linear program reported unbounded");
        case lp::Status::IterationLimit: throw SolverError("simplex iteration limit reached");
    }

    PortfolioSolution out;
    out.x.resize(d);
    for (std::size_t j = 0; j < d; ++j) out.x[j] = p.lower()[j] + sol.x[j];
    for (std::size_t i = 0; i < n; ++i) {
        out.q.push_back(floor + sol.x[q0 + i]);
        out.knot_levels.push_back(knots[i].level);
    }
    out.value = sol.objective + constant;
    out.iterations = sol.iterations;
    out.upper_bound = p.spectrum().is_majorant();
    out.gap = std::abs(out.value - portfolio_risk(p, out.x));
    return out;
}

}  // namespace

PortfolioSolution minimize_avar(const ScenarioProblem& p, double alpha, const SolveOptions& opts) {
    const StepSpectrum expected = avar_spectrum(alpha);
    const StepSpectrum& actual = p.spectrum();
    bool same = actual.cells() == expected.cells();
    for (std::size_t i = 0; same && i < expected.cells(); ++i) {
        same = std::abs(actual.breaks()[i + 1] - expected.breaks()[i + 1]) <= 1e-12 &&
               std::abs(actual.levels()[i] - expected.levels()[i]) <= 1e-12 * std::max(1.0, expected.levels()[i]);
    }
    if (!same) throw std::invalid_argument("minimize_avar: problem spectrum is not the AVaR spectrum at this level");
    return solve_ansatz(p, 0.0, {{alpha, 1.0}}, opts);
}

PortfolioSolution minimize_spectral(const ScenarioProblem& p, const SolveOptions& opts) {
    const KusuokaMeasure m = to_kusuoka(p.spectrum());
    double base = 0.0;
    std::vector<Knot> knots;
    for (const auto& a : m.atoms()) {
        if (a.location == 0.0) {
            base += a.mass;
        } else {
            knots.push_back({a.location, a.mass});
        }
    }
    return solve_ansatz(p, base, knots, opts);
}

GridResult grid_search_oracle(const ScenarioProblem& p, double step) {
    const std::size_t d = p.assets();
    if (d > 3) throw std::invalid_argument("grid_search_oracle: at most 3 assets, got " + std::to_string(d));
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("grid_search_oracle: step must lie in (0,1]");
    const auto N = static_cast<long long>(std::max(1.0, std::round(1.0 / step)));
    const double dn = static_cast<double>(N);

    GridResult best;
    best.value = std::numeric_limits<double>::infinity();
    auto consider = [&](std::vector<double> x) {
        if (!p.is_feasible(x, 1e-12)) return;
        const double v = portfolio_risk(p, x);
        if (v < best.value) {
            best.value = v;
            best.x = std::move(x);
        }
    };

    if (d == 1) {
        consider({1.0});
    } else if (d == 2) {
        for (long long i = 0; i <= N; ++i) consider({static_cast<double>(i) / dn, static_cast<double>(N - i) / dn});
    } else {
        for (long long i = 0; i <= N; ++i) {
            for (long long j = 0; i + j <= N; ++j) {
                consider({static_cast<double>(i) / dn, static_cast<double>(j) / dn, static_cast<double>(N - i - j) / dn});
            }
        }
    }
    if (best.x.empty()) throw SolverError("grid_search_oracle: no lattice point satisfies the bounds");
    return best;
}

}  // namespace srm
