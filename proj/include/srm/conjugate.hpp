#pragma once

#include <cstddef>
#include <vector>

#include "srm/distribution.hpp"
#include "srm/spectrum.hpp"

namespace srm {

/// One hinge q + (y - q)_+ / (1 - level), scaled by weight.
struct HingeTerm {
    double knot;
    double weight;  // > 0
    double level;   // in [0,1)

    bool operator==(const HingeTerm&) const = default;
};

/// f(y) = offset + base_slope * y + sum_i weight_i (knot_i + (y - knot_i)_+ / (1 - level_i)).
///
/// Convex and nondecreasing; its slope runs from base_slope (left of every
/// knot) to base_slope + sum_i weight_i / (1 - level_i). Terms are kept
/// sorted by (knot, level) with exact duplicates merged.
class PiecewiseLinearConvex {
public:
    /// Throws std::invalid_argument for a negative or non-finite base slope,
    /// negative weights, levels outside [0,1), or non-finite knots.
    static PiecewiseLinearConvex make(double base_slope, std::vector<HingeTerm> terms, double offset = 0.0);

    double base_slope() const noexcept { return base_slope_; }
    double offset() const noexcept { return offset_; }
    const std::vector<HingeTerm>& terms() const noexcept { return terms_; }

    double operator()(double y) const noexcept;

    double min_slope() const noexcept { return base_slope_; }
    double max_slope() const noexcept;

    /// Copy with a different additive constant.
    PiecewiseLinearConvex with_offset(double offset) const;

private:
    PiecewiseLinearConvex() = default;

    double base_slope_ = 0.0;
    double offset_ = 0.0;
    std::vector<HingeTerm> terms_;
};

inline double eval(const PiecewiseLinearConvex& f, double y) { return f(y); }

/// E f(Y) under d.
double expectation(const PiecewiseLinearConvex& f, const EmpiricalDistribution& d);

/// Convex piecewise-linear function on a closed interval of slopes, +infinity
/// outside. Holds the conjugate f*(x) = sup_y (x y - f(y)) of a
/// PiecewiseLinearConvex exactly.
///
/// slopes[0] < ... < slopes[r] are the breakpoints, values[j] = f*(slopes[j]),
/// and points[j] (j < r) is the derivative of f* on [slopes[j], slopes[j+1]],
/// which is also the y at which the supremum is attained there.
class ConjugateTable {
public:
    /// Builds a table from breakpoints and values; derivatives are the
    /// difference quotients. Throws std::invalid_argument if the slopes do not
    /// increase strictly or the values are not convex.
    static ConjugateTable make(std::vector<double> slopes, std::vector<double> values);

    const std::vector<double>& slopes() const noexcept { return slopes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& points() const noexcept { return points_; }

    double domain_min() const noexcept { return slopes_.front(); }
    double domain_max() const noexcept { return slopes_.back(); }

    /// Endpoints count as inside; a relative slack of 1e-12 absorbs rounding
    /// in slopes that were computed along different routes.
    bool in_domain(double x) const noexcept;

    /// f*(x), or +infinity outside the domain.
    double operator()(double x) const noexcept;

    /// (f*)*(y) = max_j (slopes[j] y - values[j]).
    double biconjugate(double y) const noexcept;

private:
    friend ConjugateTable conjugate(const PiecewiseLinearConvex&);
    friend ConjugateTable conjugate_affine(const ConjugateTable&, double, double, double, double, double);
    ConjugateTable(std::vector<double> slopes, std::vector<double> values, std::vector<double> points)
        : slopes_(std::move(slopes)), values_(std::move(values)), points_(std::move(points)) {}

    std::vector<double> slopes_;
    std::vector<double> values_;
    std::vector<double> points_;
};

/// Exact Legendre-Fenchel conjugate.
ConjugateTable conjugate(const PiecewiseLinearConvex& f);

/// Integral over [0,1] of f*(sigma(u)) du = sum_i (cell length) f*(level_i).
/// Throws std::domain_error naming the first level outside dom f*.
double conjugate_integral(const PiecewiseLinearConvex& f, const StepSpectrum& s);

struct ShiftedFunction {
    PiecewiseLinearConvex function;  // f - a
    ConjugateTable conjugate;        // f* + a
};

/// f - a together with its conjugate f* + a. Taking a = -conjugate_integral(f, s)
/// gives a function whose conjugate integral vanishes, with E f(Y) + integral unchanged. The conjugate is obtained by
/// the affine transform rule and checked against direct conjugation at every
/// breakpoint; a mismatch throws std::logic_error.
ShiftedFunction shift(const PiecewiseLinearConvex& f, double a);

/// Conjugate of g(x) = a + b x + g_scale * f(lam x + c) given the table of f*:
///   g*(y) = -a - c (y - b) / lam + g_scale * f*((y - b) / (lam g_scale)).
/// Throws std::invalid_argument if g_scale <= 0 or lam == 0.
ConjugateTable conjugate_affine(const ConjugateTable& fstar, double a, double b, double g_scale, double lam, double c);

/// f0(y) = sum over atoms of mass (q + (y - q)_+ / (1 - location)) with
/// q = F^{-1}(location). E f0(Y) equals the Kusuoka mixture and
/// conjugate_integral(f0, from_kusuoka(m)) vanishes.
///
/// An atom at location 0 becomes an ordinary hinge with knot at the minimum
/// of the support (equal to y on the support) rather than a base slope.
PiecewiseLinearConvex build_f0(const EmpiricalDistribution& d, const KusuokaMeasure& m);

}  // namespace srm
