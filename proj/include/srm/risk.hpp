#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srm/distribution.hpp"
#include "srm/spectrum.hpp"

namespace srm {

/// Integral of F^{-1}(u) sigma(u) du, summed exactly over the merged grid of
/// cumulative probabilities and spectrum breaks. With a majorant spectrum the
/// value is an upper bound (for nonnegative losses), not a risk value.
double spectral_risk(const EmpiricalDistribution& d, const StepSpectrum& s);

/// Integral over q >= 0 of tau(F(q)). Requires nonnegative support; throws
/// std::domain_error otherwise.
double spectral_risk_cdf(const EmpiricalDistribution& d, const StepSpectrum& s);

/// Average Value-at-Risk: tail mean of the quantile function above alpha;
/// alpha = 1 gives the largest support value.
double avar(const EmpiricalDistribution& d, double alpha);

struct AvarMinimizer {
    double value;
    double qstar;
};

/// Evaluates q + E(Y - q)_+ / (1 - alpha) at its minimizer q = F^{-1}(alpha).
AvarMinimizer avar_ru(const EmpiricalDistribution& d, double alpha);

/// Mixture sum_i mass_i * AVaR_{location_i}(d).
double spectral_risk_kusuoka(const EmpiricalDistribution& d, const KusuokaMeasure& m);

/// E[Y sigma(U)] for n equally likely scenarios where the uniform cell
/// (i/n, (i+1)/n] is coupled with scenario perm[i]. The sorting permutation
/// attains spectral_risk; every other coupling gives a lower value.
double comonotone_value(std::span<const double> scenarios, const StepSpectrum& s, std::span<const std::size_t> perm);

/// Overload for a distribution whose atoms all carry the same probability.
double comonotone_value(const EmpiricalDistribution& d, const StepSpectrum& s, std::span<const std::size_t> perm);

/// Scenario-wise density Z with its scenario probabilities.
struct DualVariate {
    std::vector<double> z;
    std::vector<double> probs;

    /// Throws std::invalid_argument on length mismatch, non-finite z,
    /// negative probabilities, or probabilities not summing to 1 within 1e-9.
    static DualVariate make(std::vector<double> z, std::vector<double> probs);
    static DualVariate uniform(std::vector<double> z);

    double mean() const noexcept;
};

struct FeasibilityViolation {
    double alpha;
    double slack;  // tau(alpha) - (1 - alpha) AVaR_alpha(Z); negative when violated
};

struct FeasibilityReport {
    bool feasible = false;
    double mean_residual = 0.0;  // E Z - integral of sigma
    std::vector<FeasibilityViolation> violations;
};

/// Tests Z against the convex-order condition
///   E Z = integral of sigma,  (1-alpha) AVaR_alpha(Z) <= tau(alpha)  for all alpha.
///
/// Both sides are piecewise linear in alpha with kinks only at cumulative
/// probabilities of Z and at breaks of sigma, so checking that grid is exact.
FeasibilityReport check_feasible(const DualVariate& zv, const StepSpectrum& s, double tol = 1e-9);

/// sum_s p_s y_s z_s over scenarios; throws std::invalid_argument on a length mismatch.
double dual_bound(std::span<const double> losses, const DualVariate& zv);

/// Same, with Z given on the support points of d; the probabilities must agree.
double dual_bound(const EmpiricalDistribution& d, const DualVariate& zv);

/// Z_s = (integral of sigma over the probability cell of scenario s) / p_s,
/// where cells are laid out along [0,1] in the given scenario order. The
/// result is the conditional expectation of sigma(U) and is always feasible.
DualVariate conditional_spectrum_dual(std::span<const double> probs, std::span<const std::size_t> order,
                                      const StepSpectrum& s);

/// conditional_spectrum_dual with scenarios ordered by increasing loss,
/// which attains the supremum: dual_bound equals spectral_risk.
DualVariate comonotone_dual(std::span<const double> losses, std::span<const double> probs, const StepSpectrum& s);

}  // namespace srm
