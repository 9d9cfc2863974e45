#include "srm/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace srm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double domain_slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

}  // namespace

PiecewiseLinearConvex PiecewiseLinearConvex::make(double base_slope, std::vector<HingeTerm> terms, double offset) {
    if (!std::isfinite(base_slope) || base_slope < 0.0) {
        throw std::invalid_argument("piecewise-linear function: base slope must be finite and >= 0");
    }
    if (!std::isfinite(offset)) throw std::invalid_argument("piecewise-linear function: non-finite offset");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (!std::isfinite(t.knot)) throw std::invalid_argument("hinge " + std::to_string(i) + ": non-finite knot");
        if (!std::isfinite(t.weight) || t.weight < 0.0) {
            throw std::invalid_argument("hinge " + std::to_string(i) + ": weight must be >= 0");
        }
        if (!(t.level >= 0.0 && t.level < 1.0)) {
            throw std::invalid_argument("hinge " + std::to_string(i) + ": level must lie in [0,1)");
        }
    }
    std::stable_sort(terms.begin(), terms.end(), [](const HingeTerm& x, const HingeTerm& y) {
        return x.knot < y.knot || (x.knot == y.knot && x.level < y.level);
    });

    PiecewiseLinearConvex f;
    f.base_slope_ = base_slope;
    f.offset_ = offset;
    for (const auto& t : terms) {
        if (t.weight == 0.0) continue;
        if (!f.terms_.empty() && f.terms_.back().knot == t.knot && f.terms_.back().level == t.level) {
            f.terms_.back().weight += t.weight;
        } else {
            f.terms_.push_back(t);
        }
    }
    return f;
}

double PiecewiseLinearConvex::operator()(double y) const noexcept {
    double v = offset_ + base_slope_ * y;
    for (const auto& t : terms_) v += t.weight * (t.knot + std::max(0.0, y - t.knot) / (1.0 - t.level));
    return v;
}

double PiecewiseLinearConvex::max_slope() const noexcept {
    double s = base_slope_;
    for (const auto& t : terms_) s += t.weight / (1.0 - t.level);
    return s;
}

PiecewiseLinearConvex PiecewiseLinearConvex::with_offset(double offset) const {
    PiecewiseLinearConvex f = *this;
    f.offset_ = offset;
    return f;
}

double expectation(const PiecewiseLinearConvex& f, const EmpiricalDistribution& d) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) total += d.probs()[i] * f(d.values()[i]);
    return total;
}

ConjugateTable ConjugateTable::make(std::vector<double> slopes, std::vector<double> values) {
    if (slopes.empty() || slopes.size() != values.size()) {
        throw std::invalid_argument("conjugate table: need matching nonempty slopes and values");
    }
    std::vector<double> points;
    for (std::size_t j = 0; j + 1 < slopes.size(); ++j) {
        if (!(slopes[j + 1] > slopes[j])) throw std::invalid_argument("conjugate table: slopes must increase");
        points.push_back((values[j + 1] - values[j]) / (slopes[j + 1] - slopes[j]));
        if (j > 0 && points[j] < points[j - 1]) throw std::invalid_argument("conjugate table: values not convex");
    }
    return ConjugateTable(std::move(slopes), std::move(values), std::move(points));
}

bool ConjugateTable::in_domain(double x) const noexcept {
    return x >= domain_min() - domain_slack(domain_min()) && x <= domain_max() + domain_slack(domain_max());
}

double ConjugateTable::operator()(double x) const noexcept {
    if (!in_domain(x)) return kInf;
    x = std::clamp(x, domain_min(), domain_max());
    auto it = std::upper_bound(slopes_.begin(), slopes_.end(), x);
    if (it == slopes_.end()) return values_.back();
    const auto j = static_cast<std::size_t>(it - slopes_.begin()) - 1;
    return values_[j] + (x - slopes_[j]) * points_[j];
}

double ConjugateTable::biconjugate(double y) const noexcept {
    double best = -kInf;
    for (std::size_t j = 0; j < slopes_.size(); ++j) best = std::max(best, slopes_[j] * y - values_[j]);
    return best;
}

ConjugateTable conjugate(const PiecewiseLinearConvex& f) {
    const auto& terms = f.terms();
    std::vector<double> slopes{f.base_slope()};
    std::vector<double> points;
    // Walking the knots left to right, f* is linear between consecutive slopes
    // of f with derivative equal to the knot separating them.
    for (std::size_t i = 0; i < terms.size();) {
        const double knot = terms[i].knot;
        double jump = 0.0;
        for (; i < terms.size() && terms[i].knot == knot; ++i) jump += terms[i].weight / (1.0 - terms[i].level);
        slopes.push_back(slopes.back() + jump);
        points.push_back(knot);
    }
    std::vector<double> values(slopes.size());
    if (points.empty()) {
        values[0] = -f.offset();
    } else {
        values[0] = slopes[0] * points[0] - f(points[0]);
        for (std::size_t j = 1; j < slopes.size(); ++j) values[j] = slopes[j] * points[j - 1] - f(points[j - 1]);
    }
    return ConjugateTable(std::move(slopes), std::move(values), std::move(points));
}

double conjugate_integral(const PiecewiseLinearConvex& f, const StepSpectrum& s) {
    const ConjugateTable table = conjugate(f);
    double total = 0.0;
    for (std::size_t i = 0; i < s.cells(); ++i) {
        const double level = s.levels()[i];
        const double v = table(level);
        if (!std::isfinite(v)) {
            throw std::domain_error("conjugate_integral: spectrum level " + std::to_string(level) + " (cell " +
                                    std::to_string(i) + ") lies outside dom f* = [" +
                                    std::to_string(table.domain_min()) + ", " + std::to_string(table.domain_max()) +
                                    "]");
        }
        total += (s.breaks()[i + 1] - s.breaks()[i]) * v;
    }
    return total;
}

ShiftedFunction shift(const PiecewiseLinearConvex& f, double a) {
    PiecewiseLinearConvex g = f.with_offset(f.offset() - a);
    ConjugateTable by_rule = conjugate_affine(conjugate(f), -a, 0.0, 1.0, 1.0, 0.0);
    const ConjugateTable direct = conjugate(g);
    for (std::size_t j = 0; j < direct.slopes().size(); ++j) {
        const double x = direct.slopes()[j];
        const double tol = 1e-9 * std::max({1.0, std::abs(direct.values()[j]), std::abs(a)});
        if (std::abs(by_rule(x) - direct.values()[j]) > tol) {
            throw std::logic_error("shift: (f - a)* and f* + a disagree at slope " + std::to_string(x));
        }
    }
    return {std::move(g), std::move(by_rule)};
}

ConjugateTable conjugate_affine(const ConjugateTable& fstar, double a, double b, double g_scale, double lam, double c) {
    if (!(g_scale > 0.0)) throw std::invalid_argument("conjugate_affine: scale must be positive");
    if (lam == 0.0) throw std::invalid_argument("conjugate_affine: lambda must be nonzero");

    // y = b + lam g s maps a slope s of f* to a slope of g*; on the segment
    // whose f*-derivative is p, the derivative of g* is (p - c) / lam.
    std::vector<double> slopes;
    std::vector<double> values;
    std::vector<double> points;
    for (std::size_t j = 0; j < fstar.slopes().size(); ++j) {
        const double s = fstar.slopes()[j];
        slopes.push_back(b + lam * g_scale * s);
        values.push_back(-a - c * g_scale * s + g_scale * fstar.values()[j]);
    }
    for (double p : fstar.points()) points.push_back((p - c) / lam);
    if (lam < 0.0) {
        std::reverse(slopes.begin(), slopes.end());
        std::reverse(values.begin(), values.end());
        std::reverse(points.begin(), points.end());
    }
    return ConjugateTable(std::move(slopes), std::move(values), std::move(points));
}

PiecewiseLinearConvex build_f0(const EmpiricalDistribution& d, const KusuokaMeasure& m) {
    std::vector<HingeTerm> terms;
    terms.reserve(m.size());
    for (const auto& a : m.atoms()) terms.push_back({d.quantile(a.location), a.mass, a.location});
    return PiecewiseLinearConvex::make(0.0, std::move(terms));
}

}  // namespace srm
