#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "isoharm/errors.hpp"
#include "isoharm/family.hpp"
#include "isoharm/parallel.hpp"
#include "isoharm/quartic.hpp"
#include "isoharm/rational.hpp"

namespace isoharm {

/// Inputs to the CMC r-harmonicity condition in an ambient space form of
/// sectional curvature c: a hypersurface with constant mean curvature
/// alpha and constant |A|^2 is proper r-harmonic iff the residual vanishes.
struct HarmonicityQuery {
    double c;
    int m;
    int r;
    double a2;
    double alpha2;
};

inline double residual(const HarmonicityQuery& q) {
    return q.a2 * q.a2 - q.m * q.c * q.a2 -
           (q.r - 2) * double(q.m) * double(q.m) * q.c * q.alpha2;
}

inline Rat residual_exact(const Rat& c, int m, int r, const Rat& a2, const Rat& alpha2) {
    return a2 * a2 - m * c * a2 - Rat(r - 2) * m * m * c * alpha2;
}

/// For c <= 0 every term of the residual is nonnegative, so residual = 0
/// forces a2 = 0, and a2 >= m*alpha2 then forces alpha2 = 0: no proper
/// (non-minimal) solution exists. Returns true after validating that the
/// sign argument applies.
inline bool nonexistence_flat_or_negative(const HarmonicityQuery& q) {
    if (q.c > 0.0)
        throw std::invalid_argument("nonexistence statement requires c <= 0");
    if (q.r < 2)
        throw std::invalid_argument("order r must be at least 2");
    return true;
}

/// Coefficients of the equal-multiplicity reduction A x^2 + B x + C = 0
/// in x = cos(2*ell*s).
struct DegreeQuadratic {
    Int a, b, c;
};

inline DegreeQuadratic degree_quadratic(int ell, int r) {
    if (r < 2)
        throw std::invalid_argument("order r must be at least 2");
    switch (ell) {
    case 3:
        return {Int(r), Int(14), Int(22 - r)};
    case 4:
        return {Int(r), Int(20), Int(44 - r)};
    case 6:
        return {Int(r), Int(32), Int(112 - r)};
    default:
        throw unsupported_error("no equal-multiplicity reduction for degree " +
                                std::to_string(ell));
    }
}

struct QuadraticRoot {
    double x = 0.0;
    bool exact = false;
    Rat exact_value;
    int multiplicity = 1;
};

/// Real roots of the degree reduction restricted to the admissible open
/// range x in (-1, 1); endpoint values belong to the focal varieties.
/// The discriminant sign is decided in integer arithmetic, and roots are
/// reported exactly whenever the discriminant is a perfect square.
inline std::vector<QuadraticRoot> degree_roots(int ell, int r) {
    DegreeQuadratic q = degree_quadratic(ell, r);
    Int disc = q.b * q.b - 4 * q.a * q.c;
    std::vector<QuadraticRoot> out;
    if (disc < 0)
        return out;
    Int isqrt = boost::multiprecision::sqrt(disc);
    bool square = (isqrt * isqrt == disc);
    auto admit = [&](const Rat& exact, double approx, bool is_exact, int mult) {
        QuadraticRoot root;
        root.exact = is_exact;
        if (is_exact) {
            if (!(exact > -1 && exact < 1))
                return;
            root.exact_value = exact;
            root.x = to_double(exact);
        } else {
            if (!(approx > -1.0 && approx < 1.0))
                return;
            root.x = approx;
        }
        root.multiplicity = mult;
        out.push_back(root);
    };
    if (disc == 0) {
        admit(Rat(-q.b, 2 * q.a), 0.0, true, 2);
        return out;
    }
    if (square) {
        admit(Rat(-q.b - isqrt, 2 * q.a), 0.0, true, 1);
        admit(Rat(-q.b + isqrt, 2 * q.a), 0.0, true, 1);
    } else {
        double sq = std::sqrt(to_double(Rat(disc)));
        double bd = to_double(Rat(q.b));
        double ad = to_double(Rat(q.a));
        admit(Rat(0), (-bd - sq) / (2.0 * ad), false, 1);
        admit(Rat(0), (-bd + sq) / (2.0 * ad), false, 1);
    }
    std::sort(out.begin(), out.end(),
              [](const QuadraticRoot& l, const QuadraticRoot& rgt) { return l.x < rgt.x; });
    return out;
}

struct ParameterMap {
    std::vector<double> s_values;
    std::vector<std::string> notes;
};

/// Solutions s in (0, pi/ell) of cos(2*ell*s) = x for each root: two per
/// interior root. Roots at +-1 are excluded with a note; they degenerate to
/// a focal variety (x = +1) or the minimal member (x = -1 for even 2*ell
/// branch midpoint), neither a proper hypersurface of the family.
inline ParameterMap roots_to_parameters(int ell, const std::vector<QuadraticRoot>& roots) {
    ParameterMap map;
    for (const auto& root : roots) {
        if (root.x >= 1.0) {
            map.notes.push_back("root x = " + std::to_string(root.x) +
                                (root.x > 1.0
                                     ? " excluded: above the range of cos(2*ell*s)"
                                     : " excluded: s would reach the focal variety at "
                                       "an endpoint of (0, pi/ell)"));
            continue;
        }
        if (root.x <= -1.0) {
            map.notes.push_back("root x = " + std::to_string(root.x) +
                                (root.x < -1.0
                                     ? " excluded: below the range of cos(2*ell*s)"
                                     : " excluded: cos(2*ell*s) = -1 lands on the "
                                       "minimal member, which is not proper"));
            continue;
        }
        double theta = std::acos(root.x);
        map.s_values.push_back(theta / (2.0 * ell));
        map.s_values.push_back((2.0 * pi - theta) / (2.0 * ell));
    }
    return map;
}

struct Solution {
    double s = 0.0;
    CurvatureInvariants inv;
    double residual = 0.0;
    int multiplicity = 1;
};

enum class Regime { none, some };

struct ClassificationResult {
    std::vector<Solution> solutions; // distinct s, ascending
    int count = 0;                   // roots counted with multiplicity
    Regime regime = Regime::none;
};

namespace detail {

inline Solution checked_solution(const IsoparametricFamily& fam, int r, double s, int mult) {
    Solution sol;
    sol.s = s;
    sol.inv = invariants(fam, s);
    sol.multiplicity = mult;
    HarmonicityQuery q{1.0, fam.dim(), r, sol.inv.a2, sol.inv.alpha * sol.inv.alpha};
    sol.residual = residual(q);
    double scale = std::max(1.0, sol.inv.a2 * sol.inv.a2);
    if (std::abs(sol.residual) >= 1e-9 * scale)
        throw verification_error("solution s = " + std::to_string(s) +
                                 " failed residual re-verification");
    return sol;
}

} // namespace detail

/// Full classification of the proper r-harmonic members of a degree 3, 4, or
/// 6 family: the equal-multiplicity cases reduce to a quadratic in
/// cos(2*ell*s), the degree-4 unequal case to the quartic in cos^2(2s).
/// Every solution is re-verified through the curvature invariants.
inline ClassificationResult classify(const IsoparametricFamily& fam, int r) {
    if (r < 2)
        throw std::invalid_argument("order r must be at least 2");
    ClassificationResult result;
    if (fam.degree == 4 && !fam.equal_multiplicities()) {
        HarmonicQuartic q = quartic::build(Rat(fam.m2, fam.m1), r);
        for (const auto& root : quartic::roots_in_unit_interval(q)) {
            double s = 0.5 * std::acos(std::sqrt(root.approx));
            result.solutions.push_back(detail::checked_solution(fam, r, s, root.multiplicity));
        }
    } else {
        // Degrees 1 and 2 have no classification here; degree_quadratic rejects them.
        for (const auto& root : degree_roots(fam.degree, r)) {
            double theta = std::acos(root.x);
            result.solutions.push_back(detail::checked_solution(
                fam, r, theta / (2.0 * fam.degree), root.multiplicity));
            result.solutions.push_back(detail::checked_solution(
                fam, r, (2.0 * pi - theta) / (2.0 * fam.degree), root.multiplicity));
        }
    }
    std::sort(result.solutions.begin(), result.solutions.end(),
              [](const Solution& a, const Solution& b) { return a.s < b.s; });
    for (const auto& sol : result.solutions)
        result.count += sol.multiplicity;
    result.regime = result.solutions.empty() ? Regime::none : Regime::some;
    return result;
}

struct ScanSample {
    double s;
    double value;
};

struct ScanBracket {
    double lo;
    double hi;
    bool tangency; // local minimum grazing zero rather than a sign change
};

struct ScanResult {
    std::vector<ScanSample> samples;
    std::vector<ScanBracket> brackets;
};

/// Brute-force residual scan on a uniform grid over [eps, pi/ell - eps]:
/// the independent oracle for classify and for the threshold search. Sign
/// changes are bracketed; a nonnegative local minimum below 1e-6 of the
/// local scale max(1, a2^2) is recorded as a tangency bracket.
inline ScanResult scan_residual(const IsoparametricFamily& fam, int r,
                                std::size_t grid_size, double eps = 1e-4) {
    if (grid_size < 16)
        throw std::invalid_argument("grid size must be at least 16");
    if (r < 2)
        throw std::invalid_argument("order r must be at least 2");
    double lo = eps, hi = fam.s_max() - eps;
    ScanResult result;
    result.samples.resize(grid_size);
    std::vector<double> scale(grid_size);
    int m = fam.dim();
    parallel_for(grid_size, [&](std::size_t i) {
        double s = lo + (hi - lo) * double(i) / double(grid_size - 1);
        CurvatureInvariants inv = invariants(fam, s);
        HarmonicityQuery q{1.0, m, r, inv.a2, inv.alpha * inv.alpha};
        result.samples[i] = {s, residual(q)};
        scale[i] = std::max(1.0, inv.a2 * inv.a2);
    });
    for (std::size_t i = 0; i + 1 < grid_size; ++i) {
        double a = result.samples[i].value;
        double b = result.samples[i + 1].value;
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
            result.brackets.push_back({result.samples[i].s, result.samples[i + 1].s, false});
    }
    for (std::size_t i = 1; i + 1 < grid_size; ++i) {
        double v = result.samples[i].value;
        if (v >= 0.0 && v < 1e-6 * scale[i] &&
            result.samples[i - 1].value > v && result.samples[i + 1].value > v)
            result.brackets.push_back({result.samples[i - 1].s, result.samples[i + 1].s, true});
    }
    std::sort(result.brackets.begin(), result.brackets.end(),
              [](const ScanBracket& a, const ScanBracket& b) { return a.lo < b.lo; });
    return result;
}

/// The trigonometric forms of the residual T_r(s) for isoparametric families,
/// kept verbatim for cross-checks: the expanded tan/cot expressions, the
/// collapsed csc/sec closed forms, and the quartic route for degree 4.
namespace forms {

inline double raw_display(const IsoparametricFamily& fam, int r, double s) {
    detail::require_interior(fam, s);
    double m1 = fam.m1, m2 = fam.m2;
    switch (fam.degree) {
    case 3: {
        double alt = std::tan(pi / 6 - s) - std::tan(s + pi / 6) + 1.0 / std::tan(s);
        double sq = [&] {
            double t1 = std::tan(pi / 6 - s), t2 = std::tan(s + pi / 6), ct = 1.0 / std::tan(s);
            return t1 * t1 + t2 * t2 + ct * ct;
        }();
        return m1 * m1 * ((2.0 - r) * alt * alt + sq * sq - 3.0 * sq);
    }
    case 4: {
        double t = std::tan(s), ct = 1.0 / t;
        double t4 = std::tan(s + pi / 4), ct4 = 1.0 / t4;
        double a2 = m1 * t * t + m1 * ct * ct + m2 * t4 * t4 + m2 * ct4 * ct4;
        double alt = m1 / std::tan(2.0 * s) - m2 * std::tan(2.0 * s);
        return -4.0 * (r - 2.0) * alt * alt + a2 * a2 - 2.0 * (m1 + m2) * a2;
    }
    case 6: {
        double t1 = std::tan(pi / 6 - s), t0 = std::tan(s), t2 = std::tan(s + pi / 6);
        double c1 = 1.0 / t1, c0 = 1.0 / t0, c2 = 1.0 / t2;
        double alt = -t1 + t0 + t2 + c1 - c0 - c2;
        double sq = t1 * t1 + t0 * t0 + t2 * t2 + c1 * c1 + c0 * c0 + c2 * c2;
        return m1 * m1 * ((2.0 - r) * alt * alt - 6.0 * sq + sq * sq);
    }
    default:
        throw unsupported_error("no residual display for degree " +
                                std::to_string(fam.degree));
    }
}

inline double reduced_display(const IsoparametricFamily& fam, int r, double s) {
    detail::require_interior(fam, s);
    double m1 = fam.m1;
    switch (fam.degree) {
    case 3: {
        double csc = 1.0 / std::sin(s);
        double num = r * std::cos(12.0 * s) - r + 28.0 * std::cos(6.0 * s) + 44.0;
        double den = 2.0 * std::cos(2.0 * s) + 1.0;
        return 9.0 * m1 * m1 * std::pow(csc, 4) * num / (8.0 * std::pow(den, 4));
    }
    case 4: {
        if (fam.equal_multiplicities()) {
            double csc4 = 1.0 / std::sin(4.0 * s);
            double num = r * std::cos(16.0 * s) - r + 40.0 * std::cos(8.0 * s) + 88.0;
            return 2.0 * m1 * m1 * std::pow(csc4, 4) * num;
        }
        double y = std::cos(2.0 * s) * std::cos(2.0 * s);
        double p = quartic::build(Rat(fam.m2, fam.m1), r).p.eval_double(y);
        double csc4 = 1.0 / std::sin(4.0 * s);
        return 64.0 * m1 * m1 * std::pow(csc4, 4) * p;
    }
    case 6: {
        double csc = 1.0 / std::sin(s), sec = 1.0 / std::cos(s);
        double num = r * std::cos(24.0 * s) - r + 64.0 * std::cos(12.0 * s) + 224.0;
        double den = 2.0 * std::cos(4.0 * s) + 1.0;
        return 9.0 * m1 * m1 * std::pow(csc, 4) * std::pow(sec, 4) * num /
               (32.0 * std::pow(den, 4));
    }
    default:
        throw unsupported_error("no residual display for degree " +
                                std::to_string(fam.degree));
    }
}

/// The degree-4 form with the secant grouping, valid for any multiplicities.
inline double grouped_display_degree4(int m1, int m2, int r, double s) {
    double sec2 = 1.0 / (std::cos(2.0 * s) * std::cos(2.0 * s));
    double csc = 1.0 / std::sin(s), sec = 1.0 / std::cos(s);
    double sum = m1 + m2;
    return 4.0 * r * sum * sum +
           4.0 * m2 * sec2 * (2.0 * m1 - m2 * (r + 4.0) + 4.0 * m2 * sec2) +
           0.125 * m1 * std::pow(csc, 4) * std::pow(sec, 4) *
               (std::cos(4.0 * s) * (m1 * (r + 4.0) - 2.0 * m2) - m1 * (r - 4.0) + 2.0 * m2);
}

} // namespace forms
} // namespace isoharm
