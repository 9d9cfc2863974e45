#include "srm/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace srm {

double spectral_risk(const EmpiricalDistribution& d, const StepSpectrum& s) {
    const auto& values = d.values();
    const auto& cum = d.cumulative();
    const auto& breaks = s.breaks();
    const auto& levels = s.levels();

    // Both F^{-1} and sigma are constant on the cells of the merged grid.
    double total = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    double left = 0.0;
    while (i < values.size() && j < levels.size()) {
        const double right = std::min(cum[i], breaks[j + 1]);
        if (right > left) total += values[i] * levels[j] * (right - left);
        left = std::max(left, right);
        if (cum[i] <= right) ++i;
        if (breaks[j + 1] <= right) ++j;
    }
    return total;
}

double spectral_risk_cdf(const EmpiricalDistribution& d, const StepSpectrum& s) {
    if (d.min() < 0.0) {
        throw std::domain_error("spectral_risk_cdf: support contains negative value " + std::to_string(d.min()));
    }
    const auto& values = d.values();
    const auto& cum = d.cumulative();
    // F(q) = 0 on [0, v_0), cum[i-1] on [v_{i-1}, v_i), 1 beyond v_max.
    double total = values[0] * s.tail(0.0);
    for (std::size_t i = 1; i < values.size(); ++i) total += (values[i] - values[i - 1]) * s.tail(cum[i - 1]);
    return total;
}

double avar(const EmpiricalDistribution& d, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("avar: alpha outside [0,1]: " + std::to_string(alpha));
    }
    if (alpha == 1.0) return d.max();
    const auto& values = d.values();
    const auto& cum = d.cumulative();
    double total = 0.0;
    for (std::size_t i = d.quantile_index(alpha); i < values.size(); ++i) {
        const double len = cum[i] - std::max(d.cell_begin(i), alpha);
        if (len > 0.0) total += values[i] * len;
    }
    return total / (1.0 - alpha);
}

AvarMinimizer avar_ru(const EmpiricalDistribution& d, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("avar_ru: alpha must lie in [0,1), got " + std::to_string(alpha));
    }
    const double q = d.quantile(alpha);
    double excess = 0.0;
    const auto& values = d.values();
    const auto& probs = d.probs();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > q) excess += probs[i] * (values[i] - q);
    }
    return {q + excess / (1.0 - alpha), q};
}

double spectral_risk_kusuoka(const EmpiricalDistribution& d, const KusuokaMeasure& m) {
    double total = 0.0;
    for (const auto& a : m.atoms()) total += a.mass * avar(d, a.location);
    return total;
}

namespace {

void require_permutation(std::span<const std::size_t> perm, std::size_t n) {
    if (perm.size() != n) {
        throw std::invalid_argument("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                                    std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (auto k : perm) {
        if (k >= n || seen[k]) throw std::invalid_argument("not a permutation of the scenario indices");
        seen[k] = true;
    }
}

}  // namespace

double comonotone_value(std::span<const double> scenarios, const StepSpectrum& s, std::span<const std::size_t> perm) {
    const std::size_t n = scenarios.size();
    if (n == 0) throw std::invalid_argument("comonotone_value: no scenarios");
    require_permutation(perm, n);
    const double dn = static_cast<double>(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / dn;
        const double b = static_cast<double>(i + 1) / dn;
        total += scenarios[perm[i]] * s.integrate(a, b);
    }
    return total;
}

double comonotone_value(const EmpiricalDistribution& d, const StepSpectrum& s, std::span<const std::size_t> perm) {
    const double expected = 1.0 / static_cast<double>(d.size());
    for (double p : d.probs()) {
        if (std::abs(p - expected) > 1e-12) {
            throw std::invalid_argument("comonotone_value: atoms are not equally likely");
        }
    }
    return comonotone_value(std::span<const double>(d.values()), s, perm);
}

DualVariate DualVariate::make(std::vector<double> z, std::vector<double> probs) {
    if (z.empty() || z.size() != probs.size()) {
        throw std::invalid_argument("dual variate: " + std::to_string(z.size()) + " values but " +
                                    std::to_string(probs.size()) + " probabilities");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!std::isfinite(z[i])) throw std::invalid_argument("dual variate: non-finite entry " + std::to_string(i));
        if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
            throw std::invalid_argument("dual variate: negative probability at " + std::to_string(i));
        }
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("dual variate: probabilities sum to " + std::to_string(total));
    }
    return {std::move(z), std::move(probs)};
}

DualVariate DualVariate::uniform(std::vector<double> z) {
    std::vector<double> probs(z.size(), z.empty() ? 0.0 : 1.0 / static_cast<double>(z.size()));
    return make(std::move(z), std::move(probs));
}

double DualVariate::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) m += probs[i] * z[i];
    return m;
}

FeasibilityReport check_feasible(const DualVariate& zv, const StepSpectrum& s, double tol) {
    FeasibilityReport report;
    report.mean_residual = zv.mean() - s.integral();

    const auto zd = EmpiricalDistribution::from_samples(zv.z, std::span<const double>(zv.probs));
    const auto& zval = zd.values();
    const auto& cum = zd.cumulative();

    // upper[i] = integral of F_Z^{-1} over [cum[i-1], 1].
    std::vector<double> upper(zval.size() + 1, 0.0);
    for (std::size_t i = zval.size(); i-- > 0;) upper[i] = upper[i + 1] + zval[i] * zd.probs()[i];

    // (1 - alpha) AVaR_alpha(Z) and tau(alpha) are both piecewise linear in
    // alpha with kinks only on this grid, so the grid check is exact.
    std::vector<double> grid(cum.begin(), cum.end());
    grid.insert(grid.end(), s.breaks().begin(), s.breaks().end());
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    for (double alpha : grid) {
        if (alpha >= 1.0) continue;  // both sides vanish at alpha = 1
        const std::size_t k = zd.quantile_index(alpha);
        const double g = upper[k + 1] + zval[k] * (cum[k] - alpha);
        const double slack = s.tail(alpha) - g;
        if (slack < -tol) report.violations.push_back({alpha, slack});
    }
    report.feasible = std::abs(report.mean_residual) <= tol && report.violations.empty();
    return report;
}

double dual_bound(std::span<const double> losses, const DualVariate& zv) {
    if (losses.size() != zv.z.size()) {
        throw std::invalid_argument("dual_bound: " + std::to_string(losses.size()) + " losses but " +
                                    std::to_string(zv.z.size()) + " dual entries");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) total += zv.probs[i] * losses[i] * zv.z[i];
    return total;
}

double dual_bound(const EmpiricalDistribution& d, const DualVariate& zv) {
    if (d.size() != zv.z.size()) {
        throw std::invalid_argument("dual_bound: distribution has " + std::to_string(d.size()) +
                                    " atoms but dual variate has " + std::to_string(zv.z.size()));
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::abs(d.probs()[i] - zv.probs[i]) > 1e-12) {
            throw std::invalid_argument("dual_bound: probabilities differ at atom " + std::to_string(i));
        }
    }
    return dual_bound(std::span<const double>(d.values()), zv);
}

DualVariate conditional_spectrum_dual(std::span<const double> probs, std::span<const std::size_t> order,
                                      const StepSpectrum& s) {
    require_permutation(order, probs.size());
    std::vector<double> z(probs.size(), 0.0);
    double left = 0.0;
    double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t sc = order[k];
        acc += probs[sc];
        const double right = k + 1 == order.size() ? 1.0 : std::min(1.0, acc / total);
        z[sc] = probs[sc] > 0.0 ? s.integrate(left, right) / probs[sc] : 0.0;
        left = right;
    }
    return DualVariate::make(std::move(z), std::vector<double>(probs.begin(), probs.end()));
}

DualVariate comonotone_dual(std::span<const double> losses, std::span<const double> probs, const StepSpectrum& s) {
    if (losses.size() != probs.size()) throw std::invalid_argument("comonotone_dual: length mismatch");
    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
    return conditional_spectrum_dual(probs, order, s);
}

}  // namespace srm
