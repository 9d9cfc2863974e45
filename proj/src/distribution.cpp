#include "srm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace srm {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::span<const double> values,
                                                          std::optional<std::span<const double>> probs) {
    if (values.empty()) {
        throw std::invalid_argument("from_samples: empty sample");
    }
    if (probs && probs->size() != values.size()) {
        throw std::invalid_argument("from_samples: " + std::to_string(values.size()) + " values but " +
                                    std::to_string(probs->size()) + " probabilities");
    }

    struct Atom {
        double value;
        double weight;
    };
    std::vector<Atom> atoms;
    atoms.reserve(values.size());
    const double equal = 1.0 / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("from_samples: non-finite value at index " + std::to_string(i));
        }
        const double w = probs ? (*probs)[i] : equal;
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("from_samples: negative or non-finite probability at index " +
                                        std::to_string(i));
        }
        if (w > 0.0) atoms.push_back({values[i], w});
    }
    if (atoms.empty()) {
        throw std::invalid_argument("from_samples: all probabilities are zero");
    }

    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });

    std::vector<double> v;
    std::vector<double> p;
    for (const auto& a : atoms) {
        if (!v.empty() && v.back() == a.value) {
            p.back() += a.weight;
        } else {
            v.push_back(a.value);
            p.push_back(a.weight);
        }
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& w : p) w /= total;
    return EmpiricalDistribution(std::move(v), std::move(p));
}

EmpiricalDistribution EmpiricalDistribution::point_mass(double value) {
    const double v[] = {value};
    return from_samples(v);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)), cum_(probs_.size()) {
    std::partial_sum(probs_.begin(), probs_.end(), cum_.begin());
    cum_.back() = 1.0;
}

double EmpiricalDistribution::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * probs_[i];
    return m;
}

std::size_t EmpiricalDistribution::quantile_index(double alpha) const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("quantile: alpha outside [0,1]: " + std::to_string(alpha));
    }
    // First cumulative entry >= alpha; the final entry is exactly 1.
    auto it = std::lower_bound(cum_.begin(), cum_.end(), alpha);
    return static_cast<std::size_t>(it - cum_.begin());
}

double EmpiricalDistribution::cdf(double y) const noexcept {
    auto it = std::upper_bound(values_.begin(), values_.end(), y);
    if (it == values_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

}  // namespace srm
