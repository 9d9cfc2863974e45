#include "srm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace srm {
namespace {

constexpr double kIntegralTol = 1e-12;

struct Canonical {
    std::vector<double> breaks;
    std::vector<double> levels;
};

Canonical canonicalize(const std::vector<double>& breaks, const std::vector<double>& levels) {
    if (breaks.size() < 2 || levels.size() + 1 != breaks.size()) {
        throw std::invalid_argument("step spectrum: need m+1 breaks for m levels (got " +
                                    std::to_string(breaks.size()) + " breaks, " + std::to_string(levels.size()) +
                                    " levels)");
    }
    if (breaks.front() != 0.0 || breaks.back() != 1.0) {
        throw std::invalid_argument("step spectrum: breaks must start at 0 and end at 1");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i]) || levels[i] < 0.0) {
            throw std::invalid_argument("step spectrum: negative or non-finite level at index " + std::to_string(i));
        }
        if (!(breaks[i + 1] >= breaks[i])) {
            throw std::invalid_argument("step spectrum: breaks decrease at index " + std::to_string(i + 1));
        }
        if (i > 0 && levels[i] < levels[i - 1]) {
            throw std::invalid_argument("step spectrum: levels decrease at index " + std::to_string(i));
        }
    }

    Canonical c;
    c.breaks.push_back(0.0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (breaks[i + 1] == breaks[i]) continue;
        if (!c.levels.empty() && c.levels.back() == levels[i]) {
            c.breaks.back() = breaks[i + 1];
        } else {
            c.levels.push_back(levels[i]);
            c.breaks.push_back(breaks[i + 1]);
        }
    }
    return c;
}

double cell_sum(const Canonical& c) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.levels.size(); ++i) total += c.levels[i] * (c.breaks[i + 1] - c.breaks[i]);
    return total;
}

}  // namespace

StepSpectrum StepSpectrum::make(std::vector<double> breaks, std::vector<double> levels, bool normalize) {
    Canonical c = canonicalize(breaks, levels);
    const double total = cell_sum(c);
    if (normalize) {
        if (!(total > 0.0)) throw std::invalid_argument("step spectrum: cannot normalize a zero spectrum");
        for (auto& l : c.levels) l /= total;
        // Rescaling can merge nothing new; equal levels stay equal.
    } else if (std::abs(total - 1.0) > kIntegralTol) {
        throw std::invalid_argument("step spectrum: integral " + std::to_string(total) + " is not 1");
    }
    return StepSpectrum(std::move(c.breaks), std::move(c.levels), false);
}

StepSpectrum StepSpectrum::majorant(std::vector<double> breaks, std::vector<double> levels) {
    Canonical c = canonicalize(breaks, levels);
    const double total = cell_sum(c);
    if (total < 1.0 - kIntegralTol) {
        throw std::invalid_argument("step majorant: integral " + std::to_string(total) + " is below 1");
    }
    const bool flagged = total > 1.0 + kIntegralTol;
    return StepSpectrum(std::move(c.breaks), std::move(c.levels), flagged);
}

StepSpectrum::StepSpectrum(std::vector<double> breaks, std::vector<double> levels, bool majorant)
    : breaks_(std::move(breaks)), levels_(std::move(levels)), tail_(breaks_.size(), 0.0), majorant_(majorant) {
    for (std::size_t i = levels_.size(); i-- > 0;) {
        tail_[i] = tail_[i + 1] + levels_[i] * (breaks_[i + 1] - breaks_[i]);
    }
}

std::size_t StepSpectrum::cell_of(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::invalid_argument("spectrum: argument outside [0,1]: " + std::to_string(u));
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    const auto idx = static_cast<std::size_t>(it - breaks_.begin());
    return std::min(idx - 1, levels_.size() - 1);
}

double StepSpectrum::operator()(double u) const { return levels_[cell_of(u)]; }

double StepSpectrum::tail(double alpha) const {
    const std::size_t k = cell_of(alpha);
    return tail_[k + 1] + levels_[k] * (breaks_[k + 1] - alpha);
}

StepSpectrum avar_spectrum(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("avar_spectrum: alpha must lie in [0,1), got " + std::to_string(alpha));
    }
    return StepSpectrum::make({0.0, alpha, 1.0}, {0.0, 1.0 / (1.0 - alpha)});
}

StepSpectrum expectation_spectrum() { return StepSpectrum::make({0.0, 1.0}, {1.0}); }

double tau(const StepSpectrum& s, double alpha) { return s.tail(alpha); }

KusuokaMeasure KusuokaMeasure::make(std::vector<KusuokaAtom> atoms, bool normalize) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& a = atoms[i];
        if (!(a.location >= 0.0 && a.location < 1.0)) {
            throw std::invalid_argument("Kusuoka measure: atom location must lie in [0,1), got " +
                                        std::to_string(a.location) + " at index " + std::to_string(i));
        }
        if (!std::isfinite(a.mass) || a.mass < 0.0) {
            throw std::invalid_argument("Kusuoka measure: negative or non-finite mass at index " + std::to_string(i));
        }
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const KusuokaAtom& x, const KusuokaAtom& y) { return x.location < y.location; });
    std::vector<KusuokaAtom> merged;
    for (const auto& a : atoms) {
        if (a.mass == 0.0) continue;
        if (!merged.empty() && merged.back().location == a.location) {
            merged.back().mass += a.mass;
        } else {
            merged.push_back(a);
        }
    }
    KusuokaMeasure m(std::move(merged));
    const double total = m.total_mass();
    if (normalize) {
        if (!(total > 0.0)) throw std::invalid_argument("Kusuoka measure: cannot normalize zero mass");
        for (auto& a : m.atoms_) a.mass /= total;
    } else if (std::abs(total - 1.0) > kIntegralTol) {
        throw std::invalid_argument("Kusuoka measure: total mass " + std::to_string(total) + " is not 1");
    }
    return m;
}

double KusuokaMeasure::total_mass() const noexcept {
    double total = 0.0;
    for (const auto& a : atoms_) total += a.mass;
    return total;
}

KusuokaMeasure to_kusuoka(const StepSpectrum& s) {
    const auto& breaks = s.breaks();
    const auto& levels = s.levels();
    std::vector<KusuokaAtom> atoms;
    if (levels.front() > 0.0) atoms.push_back({0.0, levels.front()});
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double mass = (1.0 - breaks[i]) * (levels[i] - levels[i - 1]);
        if (mass > 0.0) atoms.push_back({breaks[i], mass});
    }
    return KusuokaMeasure(std::move(atoms));
}

StepSpectrum from_kusuoka(const KusuokaMeasure& m) {
    const auto& atoms = m.atoms();
    if (atoms.empty()) throw std::invalid_argument("from_kusuoka: empty measure");
    std::vector<double> breaks{0.0};
    std::vector<double> levels;
    double level = 0.0;
    for (const auto& a : atoms) {
        if (a.location > 0.0) {
            levels.push_back(level);
            breaks.push_back(a.location);
        }
        level += a.mass / (1.0 - a.location);
    }
    levels.push_back(level);
    breaks.push_back(1.0);
    return StepSpectrum::majorant(std::move(breaks), std::move(levels));
}

Discretization discretize_upper(const std::function<double(double)>& sigma_fn, std::size_t n) {
    if (n == 0) throw std::invalid_argument("discretize_upper: need at least one cell");

    auto eval = [&](double u) {
        const double v = sigma_fn(u);
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("discretize_upper: density is negative or non-finite at " + std::to_string(u));
        }
        return v;
    };

    // A nondecreasing density integrates between its lower and upper step
    // sums on any grid; 1 must fall inside that bracket.
    constexpr std::size_t kCheckCells = 1u << 16;
    double lower = 0.0;
    double upper = 0.0;
    double prev = eval(0.0);
    for (std::size_t k = 1; k <= kCheckCells; ++k) {
        const double right = static_cast<double>(k) / kCheckCells;
        const double v = eval(std::nextafter(right, 0.0));
        if (v < prev) throw std::invalid_argument("discretize_upper: density decreases near " + std::to_string(right));
        lower += prev;
        upper += v;
        prev = eval(right);
        if (prev < v) throw std::invalid_argument("discretize_upper: density decreases at " + std::to_string(right));
    }
    lower /= kCheckCells;
    upper /= kCheckCells;
    if (lower > 1.0 + 1e-6 || upper < 1.0 - 1e-6) {
        throw std::invalid_argument("discretize_upper: density does not integrate to 1 (bracket [" +
                                    std::to_string(lower) + ", " + std::to_string(upper) + "])");
    }

    std::vector<double> breaks(n + 1);
    std::vector<double> levels(n);
    for (std::size_t i = 0; i <= n; ++i) breaks[i] = static_cast<double>(i) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) levels[i] = eval(std::nextafter(breaks[i + 1], 0.0));

    StepSpectrum s = StepSpectrum::majorant(std::move(breaks), std::move(levels));
    const double excess = s.excess();
    return {std::move(s), excess};
}

}  // namespace srm
