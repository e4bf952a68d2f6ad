#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isoharm/polynomial.hpp"
#include "isoharm/sturm.hpp"

namespace isoharm {

/// The quartic governing proper r-harmonic members of a degree-4 family with
/// multiplicity ratio b = m2/m1, in the variable y = cos^2(2s).
struct HarmonicQuartic {
    Rat b;
    int r;
    Poly p; // ascending coefficients, exact rationals
};

namespace quartic {

inline void require_ratio(const Rat& b) {
    if (!(b > 0))
        throw std::invalid_argument("multiplicity ratio must be positive");
}

/// Q_b(y) = 2 [ 2 b^2 (1-y)^3 + b y (1-y) + 2 y^3 ].
inline Poly q_part(const Rat& b) {
    require_ratio(b);
    Poly y = Poly::monomial(1, 1);
    Poly one_minus_y = Poly::constant(1) - y;
    Poly cube = one_minus_y * one_minus_y * one_minus_y;
    return Rat(2) * (Rat(2) * b * b * cube + b * (y * one_minus_y) +
                     Rat(2) * (y * y * y));
}

/// R_b(y) = (1-y) y [ b (y-1) + y ]^2.
inline Poly r_part(const Rat& b) {
    require_ratio(b);
    Poly y = Poly::monomial(1, 1);
    Poly one_minus_y = Poly::constant(1) - y;
    Poly lin = b * (y - Poly::constant(1)) + y;
    return one_minus_y * y * lin * lin;
}

inline Rat y_zero(const Rat& b) {
    require_ratio(b);
    return b / (1 + b);
}

inline HarmonicQuartic build(const Rat& b, int r) {
    require_ratio(b);
    if (r < 2)
        throw std::invalid_argument("order r must be at least 2");
    Rat rr(r);
    std::vector<Rat> c{
        4 * b * b,
        -b * b * rr - 12 * b * b + 2 * b,
        3 * b * b * rr + 12 * b * b + 2 * b * rr - 2 * b,
        -3 * b * b * rr - 4 * b * b - 4 * b * rr - rr + 4,
        b * b * rr + 2 * b * rr + rr,
    };
    return HarmonicQuartic{b, r, Poly(std::move(c))};
}

/// All real roots of P_{b,r} in the open interval (0,1), certified by Sturm
/// counts over the rationals and refined to double precision. The endpoint
/// values P(0) = 4b^2 and P(1) = 4 are positive, so no root is lost there.
inline std::vector<RootRecord> roots_in_unit_interval(const HarmonicQuartic& q) {
    return isolate_real_roots(q.p, Rat(0), Rat(1));
}

/// Both sides of the reflection identity b^2 P_{1/b,r}(1-y) = P_{b,r}(y),
/// evaluated exactly.
inline std::pair<Rat, Rat> symmetry_check(const Rat& b, int r, const Rat& y) {
    Rat lhs = b * b * build(Rat(1) / b, r).p(1 - y);
    Rat rhs = build(b, r).p(y);
    return {lhs, rhs};
}

struct EqualMultComparison {
    double y_plus;
    double y_minus;
    double p_at_y_plus;
    double p_at_y_minus;
    Rat quadratic_value; // r x^2 + 20 x + 44 - r, exact
};

/// Change of variable y = (2 +- sqrt(2) sqrt(x+1))/4 linking the b = 1 quartic
/// with the equal-multiplicity quadratic in x = cos(8s).
inline EqualMultComparison equal_mult_consistency(int r, const Rat& x) {
    if (!(x > -1 && x < 1))
        throw std::domain_error("x must lie in the open interval (-1, 1)");
    EqualMultComparison cmp;
    double xd = to_double(x);
    double root = std::sqrt(2.0 * (xd + 1.0));
    cmp.y_plus = (2.0 + root) / 4.0;
    cmp.y_minus = (2.0 - root) / 4.0;
    Poly p1 = build(Rat(1), r).p;
    cmp.p_at_y_plus = p1.eval_double(cmp.y_plus);
    cmp.p_at_y_minus = p1.eval_double(cmp.y_minus);
    cmp.quadratic_value = Rat(r) * x * x + 20 * x + (44 - r);
    return cmp;
}

} // namespace quartic
} // namespace isoharm
