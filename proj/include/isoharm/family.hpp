#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isoharm/errors.hpp"

namespace isoharm {

inline constexpr double pi = std::numbers::pi_v<double>;

/// An isoparametric family M_s of the unit sphere: ell distinct principal
/// curvatures cot(s + (i-1)pi/ell) with multiplicities alternating m1, m2.
/// Degrees 3 and 6 force m1 = m2; degree 1 has a single block.
struct IsoparametricFamily {
    int degree;
    int m1;
    int m2;

    IsoparametricFamily(int ell, int mult1, int mult2)
        : degree(ell), m1(mult1), m2(mult2) {
        if (ell != 1 && ell != 2 && ell != 3 && ell != 4 && ell != 6)
            throw unsupported_error("degree must be one of 1, 2, 3, 4, 6; got " +
                                    std::to_string(ell));
        if (m1 < 1 || m2 < 1)
            throw std::invalid_argument("multiplicities must be positive integers");
        if ((ell == 3 || ell == 6) && m1 != m2)
            throw unsupported_error("degree " + std::to_string(ell) +
                                    " families have equal multiplicities");
        if (ell == 1)
            m2 = m1; // single curvature block
    }

    /// Hypersurface dimension m = sum of the ell multiplicities.
    int dim() const {
        int total = 0;
        for (int i = 0; i < degree; ++i)
            total += (i % 2 == 0) ? m1 : m2;
        return total;
    }

    bool equal_multiplicities() const { return m1 == m2; }

    /// Upper endpoint of the parameter interval (0, pi/ell).
    double s_max() const { return pi / degree; }
};

struct CurvatureInvariants {
    double s = 0.0;
    std::vector<std::pair<double, int>> principal; // (k_i, multiplicity)
    double alpha = 0.0;                            // mean curvature
    double a2 = 0.0;                               // squared shape-operator norm
};

namespace detail {

inline void require_interior(const IsoparametricFamily& fam, double s) {
    if (!(s > 0.0 && s < fam.s_max()))
        throw std::domain_error("parameter s = " + std::to_string(s) +
                                " outside the open interval (0, pi/" +
                                std::to_string(fam.degree) + ")");
}

} // namespace detail

inline std::vector<std::pair<double, int>>
principal_curvatures(const IsoparametricFamily& fam, double s) {
    detail::require_interior(fam, s);
    std::vector<std::pair<double, int>> out;
    out.reserve(fam.degree);
    for (int i = 0; i < fam.degree; ++i) {
        double angle = s + i * pi / fam.degree;
        out.emplace_back(1.0 / std::tan(angle), (i % 2 == 0) ? fam.m1 : fam.m2);
    }
    return out;
}

inline CurvatureInvariants invariants(const IsoparametricFamily& fam, double s) {
    CurvatureInvariants inv;
    inv.s = s;
    inv.principal = principal_curvatures(fam, s);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& [k, mult] : inv.principal) {
        sum += mult * k;
        sum2 += mult * k * k;
    }
    inv.alpha = sum / fam.dim();
    inv.a2 = sum2;
    return inv;
}

/// The unique s* in (0, pi/ell) where the mean curvature vanishes. Closed form
/// for degree 4; the midpoint for equal multiplicities; otherwise bisection on
/// the strictly decreasing alpha(s).
inline double minimal_parameter(const IsoparametricFamily& fam) {
    if (fam.degree == 4)
        return 0.5 * std::acos(std::sqrt(double(fam.m2) / (fam.m1 + fam.m2)));
    if (fam.equal_multiplicities())
        return pi / (2.0 * fam.degree);
    double lo = 1e-9, hi = fam.s_max() - 1e-9;
    while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        double a = invariants(fam, mid).alpha;
        if (std::abs(a) < 1e-14)
            return mid;
        (a > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace isoharm
