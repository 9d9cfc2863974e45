#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace srm {

/// Nondecreasing, nonnegative step density on [0,1]:
///   sigma(u) = levels[i]  for u in [breaks[i], breaks[i+1]).
///
/// A regular spectrum integrates to one. A majorant (see discretize_upper)
/// dominates some spectrum pointwise and integrates to 1 + excess(); risk
/// values computed with it are upper bounds rather than coherent risk values.
///
/// Stored in canonical form: zero-length cells dropped, consecutive equal
/// levels merged.
class StepSpectrum {
public:
    /// Throws std::invalid_argument if breaks do not run from 0 to 1 in
    /// nondecreasing order, levels decrease or are negative, or the integral
    /// differs from 1 by more than 1e-12 (unless normalize rescales levels).
    static StepSpectrum make(std::vector<double> breaks, std::vector<double> levels, bool normalize = false);

    /// Same validation, but the integral may exceed one; the result is
    /// flagged as a majorant when it does.
    static StepSpectrum majorant(std::vector<double> breaks, std::vector<double> levels);

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    std::size_t cells() const noexcept { return levels_.size(); }

    double integral() const noexcept { return tail_.front(); }
    bool is_majorant() const noexcept { return majorant_; }
    /// integral() - 1 for majorants, 0 otherwise.
    double excess() const noexcept { return majorant_ ? integral() - 1.0 : 0.0; }

    /// sigma(u); u = 1 maps to the last level.
    double operator()(double u) const;

    /// Index of the cell containing u (half-open cells, u = 1 in the last cell).
    std::size_t cell_of(double u) const;

    /// Integral of sigma over [alpha, 1].
    double tail(double alpha) const;

    /// Integral of sigma over [a, b], 0 <= a <= b <= 1.
    double integrate(double a, double b) const { return tail(a) - tail(b); }

    bool operator==(const StepSpectrum&) const = default;

private:
    StepSpectrum(std::vector<double> breaks, std::vector<double> levels, bool majorant);

    std::vector<double> breaks_;
    std::vector<double> levels_;
    std::vector<double> tail_;  // tail_[i] = integral over [breaks_[i], 1]
    bool majorant_ = false;
};

/// sigma = 1/(1-alpha) on [alpha,1), 0 below. alpha = 0 gives sigma = 1.
StepSpectrum avar_spectrum(double alpha);

/// sigma = 1, the spectrum of the expectation.
StepSpectrum expectation_spectrum();

/// Tail integral tau(alpha) = integral of sigma over [alpha, 1].
double tau(const StepSpectrum& s, double alpha);

struct KusuokaAtom {
    double location;  // in [0,1)
    double mass;      // > 0

    bool operator==(const KusuokaAtom&) const = default;
};

/// Finite atomic measure on [0,1) mixing Average Value-at-Risk levels.
/// A regular measure has total mass one; the image of a majorant spectrum
/// carries the same total mass as the spectrum's integral.
class KusuokaMeasure {
public:
    /// Sorts atoms, merges equal locations and drops zero masses.
    /// Throws std::invalid_argument for locations outside [0,1), negative
    /// masses, or total mass not within 1e-12 of 1 (unless normalize).
    static KusuokaMeasure make(std::vector<KusuokaAtom> atoms, bool normalize = false);

    const std::vector<KusuokaAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double total_mass() const noexcept;

private:
    friend KusuokaMeasure to_kusuoka(const StepSpectrum&);
    explicit KusuokaMeasure(std::vector<KusuokaAtom> atoms) : atoms_(std::move(atoms)) {}

    std::vector<KusuokaAtom> atoms_;
};

/// mu = sigma_1 delta_0 + sum_i (1 - alpha_i)(sigma_{i+1} - sigma_i) delta_{alpha_i}.
KusuokaMeasure to_kusuoka(const StepSpectrum& s);

/// sigma_mu(alpha) = sum over atoms at locations <= alpha of mass / (1 - location).
StepSpectrum from_kusuoka(const KusuokaMeasure& m);

struct Discretization {
    StepSpectrum spectrum;
    double excess;  // integral of the majorant minus one
};

/// Step majorant of a nondecreasing density on n uniform cells. The level on
/// [a_{i-1}, a_i) is the left limit sigma_fn(a_i-), so sigma_fn <= result
/// pointwise. The result is not renormalized.
///
/// Throws std::invalid_argument if sigma_fn yields non-finite or negative
/// values, decreases, or does not integrate to one within 1e-6.
Discretization discretize_upper(const std::function<double(double)>& sigma_fn, std::size_t n);

}  // namespace srm
