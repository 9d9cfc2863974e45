#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace srm {

/// Finite discrete law on the real line.
///
/// Support values are strictly increasing, probabilities are positive and
/// sum to one. Quantiles follow the left-continuous convention
/// F^{-1}(a) = inf{ y : P(Y <= y) >= a }, so quantile(0) is the smallest
/// support value and quantile(1) the largest.
class EmpiricalDistribution {
public:
    /// Canonicalizes samples: duplicates merged, zero weights dropped,
    /// weights renormalized to sum to one. Missing probs means equal weights.
    /// Throws std::invalid_argument on empty input, negative or non-finite
    /// weights, all-zero weights, or a length mismatch.
    static EmpiricalDistribution from_samples(std::span<const double> values,
                                              std::optional<std::span<const double>> probs = std::nullopt);

    static EmpiricalDistribution point_mass(double value);

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& probs() const noexcept { return probs_; }

    /// Cumulative probabilities; cumulative()[i] = P(Y <= values()[i]).
    /// The last entry is exactly 1.
    const std::vector<double>& cumulative() const noexcept { return cum_; }

    double min() const noexcept { return values_.front(); }
    double max() const noexcept { return values_.back(); }
    double mean() const noexcept;

    /// Index of the support point returned by quantile(alpha).
    std::size_t quantile_index(double alpha) const;
    double quantile(double alpha) const { return values_[quantile_index(alpha)]; }

    /// P(Y <= y).
    double cdf(double y) const noexcept;

    /// Lower end of the probability cell of support point i: cumulative()[i-1], or 0.
    double cell_begin(std::size_t i) const noexcept { return i == 0 ? 0.0 : cum_[i - 1]; }

private:
    EmpiricalDistribution(std::vector<double> values, std::vector<double> probs);

    std::vector<double> values_;
    std::vector<double> probs_;
    std::vector<double> cum_;
};

}  // namespace srm
