#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isoharm/polynomial.hpp"

namespace isoharm {

/// Canonical Sturm chain: p, p', then negated remainders, each reduced to an
/// integer-primitive representative (a positive scalar multiple, so the sign
/// pattern at any point is unchanged).
inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    Poly a = p.primitive_part();
    if (a.is_zero())
        throw std::invalid_argument("Sturm chain of the zero polynomial");
    chain.push_back(a);
    Poly b = a.derivative().primitive_part();
    while (!b.is_zero()) {
        chain.push_back(b);
        Poly r = (-Poly::divmod(chain[chain.size() - 2], b).second).primitive_part();
        b = std::move(r);
    }
    return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rat& x) {
    int count = 0;
    int prev = 0;
    for (const auto& q : chain) {
        int s = q(x).sign();
        if (s != 0) {
            if (prev != 0 && s != prev)
                ++count;
            prev = s;
        }
    }
    return count;
}

/// Number of distinct real roots in the half-open interval (lo, hi].
/// Endpoints must not be roots of the chain head for the open/half-open
/// distinction to be immaterial; callers below guarantee this.
inline int count_distinct_roots(const std::vector<Poly>& chain, const Rat& lo, const Rat& hi) {
    if (!(lo < hi))
        throw std::invalid_argument("empty interval in root count");
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

inline Poly square_free_part(const Poly& p) {
    Poly g = poly_gcd(p, p.derivative());
    if (g.degree() <= 0)
        return p.primitive_part();
    auto [q, r] = Poly::divmod(p, g);
    if (!r.is_zero())
        throw std::logic_error("square-free division left a remainder");
    return q.primitive_part();
}

/// One distinct real root of a polynomial. Either pinned exactly (a rational
/// root hit during bisection) or bracketed by an open interval on which the
/// square-free part changes sign.
struct RootRecord {
    Rat lo;
    Rat hi;
    bool exact = false;
    Rat exact_value;
    int multiplicity = 1;
    double approx = 0.0;
};

namespace detail {

inline void isolate_rec(const Poly& sf, const std::vector<Poly>& chain,
                        const Rat& lo, const Rat& hi, int n,
                        std::vector<RootRecord>& out, int depth) {
    if (n == 0)
        return;
    if (depth > 512)
        throw std::runtime_error("root isolation recursion limit");
    if (n == 1 && sf(lo).sign() * sf(hi).sign() < 0) {
        RootRecord rec;
        rec.lo = lo;
        rec.hi = hi;
        out.push_back(rec);
        return;
    }
    Rat mid = (lo + hi) / 2;
    if (sf(mid) == 0) {
        RootRecord rec;
        rec.lo = mid;
        rec.hi = mid;
        rec.exact = true;
        rec.exact_value = mid;
        out.push_back(rec);
        // Carve out an isolating neighbourhood of the exact root before
        // recursing on what remains of the interval.
        Rat delta = (hi - lo) / 4;
        while (sf(mid - delta) == 0 || sf(mid + delta) == 0 ||
               count_distinct_roots(chain, mid - delta, mid + delta) != 1)
            delta /= 2;
        int left = count_distinct_roots(chain, lo, mid - delta);
        int right = count_distinct_roots(chain, mid + delta, hi);
        isolate_rec(sf, chain, lo, mid - delta, left, out, depth + 1);
        isolate_rec(sf, chain, mid + delta, hi, right, out, depth + 1);
        return;
    }
    int left = count_distinct_roots(chain, lo, mid);
    isolate_rec(sf, chain, lo, mid, left, out, depth + 1);
    isolate_rec(sf, chain, mid, hi, n - left, out, depth + 1);
}

// Small-denominator rational candidate for x by continued fractions, used to
// recognize exact roots that bisection midpoints cannot hit. Callers must
// gate the candidate with an exact evaluation.
inline bool rational_from_double(double x, Rat& out) {
    const long long max_den = 20000000;
    long long p0 = 1, q0 = 0, p1 = 0, q1 = 1;
    double rem = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(rem);
        if (fl > 9e17 || fl < -9e17)
            break;
        long long a = static_cast<long long>(fl);
        long long p2 = a * p0 + p1;
        long long q2 = a * q0 + q1;
        if (q2 > max_den)
            break;
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        double value = double(p0) / double(q0);
        if (std::abs(value - x) < 1e-12 * std::max(1.0, std::abs(x))) {
            out = Rat(Int(p0), Int(q0));
            return true;
        }
        double frac = rem - fl;
        if (frac < 1e-15)
            break;
        rem = 1.0 / frac;
    }
    return false;
}

// Largest k such that the root bracketed by rec is a root of every element of
// the gcd chain g[0..k-1]; this equals the multiplicity in the original poly.
inline int multiplicity_of(const std::vector<Poly>& gcd_chain, const RootRecord& rec) {
    int mult = 1;
    for (std::size_t j = 1; j < gcd_chain.size(); ++j) {
        const Poly& g = gcd_chain[j];
        if (g.degree() <= 0)
            break;
        bool has;
        if (rec.exact) {
            has = g(rec.exact_value) == 0;
        } else {
            has = count_distinct_roots(sturm_chain(g), rec.lo, rec.hi) == 1;
        }
        if (!has)
            break;
        ++mult;
    }
    return mult;
}

} // namespace detail

/// Safeguarded Newton refinement of a bracketed simple root of sf.
/// The bracket is first narrowed by exact bisection, then polished in double
/// precision; every Newton step is clipped to the current bracket.
inline double refine_root(const Poly& sf, const Rat& lo0, const Rat& hi0,
                          double tol = 1e-14) {
    Rat lo = lo0, hi = hi0;
    int slo = sf(lo).sign();
    if (slo == 0 || sf(hi).sign() == 0 || slo * sf(hi).sign() > 0)
        throw std::invalid_argument("refine_root requires a sign-change bracket");
    const Rat width_stop(Int(1), Int(1) << 72);
    for (int it = 0; it < 200 && hi - lo > width_stop; ++it) {
        Rat mid = (lo + hi) / 2;
        int sm = sf(mid).sign();
        if (sm == 0)
            return to_double(mid);
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    double a = to_double(lo), b = to_double(hi);
    double x = 0.5 * (a + b);
    Poly d = sf.derivative();
    for (int it = 0; it < 50; ++it) {
        double fx = sf.eval_double(x);
        double dx = d.eval_double(x);
        if (dx == 0.0)
            break;
        double step = fx / dx;
        double xn = x - step;
        if (!(xn >= a && xn <= b))
            xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= tol * std::max(1.0, std::abs(x))) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

/// Isolate every distinct real root of p in the open interval (lo, hi),
/// with multiplicities, sorted ascending, each refined to double precision.
/// p must not vanish at either endpoint.
inline std::vector<RootRecord> isolate_real_roots(const Poly& p, const Rat& lo, const Rat& hi) {
    if (p.is_zero())
        throw std::invalid_argument("cannot isolate roots of the zero polynomial");
    if (p(lo) == 0 || p(hi) == 0)
        throw std::invalid_argument("root isolation endpoints must not be roots");
    std::vector<RootRecord> out;
    if (p.degree() == 0)
        return out;
    Poly sf = square_free_part(p);
    auto chain = sturm_chain(sf);
    int n = count_distinct_roots(chain, lo, hi);
    detail::isolate_rec(sf, chain, lo, hi, n, out, 0);
    std::sort(out.begin(), out.end(),
              [](const RootRecord& a, const RootRecord& b) { return a.lo < b.lo; });

    std::vector<Poly> gcd_chain{p.primitive_part()};
    while (gcd_chain.back().degree() > 0) {
        Poly g = poly_gcd(gcd_chain.back(), gcd_chain.back().derivative());
        if (g.degree() <= 0)
            break;
        gcd_chain.push_back(g);
    }
    for (auto& rec : out) {
        if (rec.exact) {
            rec.approx = to_double(rec.exact_value);
        } else {
            rec.approx = refine_root(sf, rec.lo, rec.hi);
            Rat candidate;
            if (detail::rational_from_double(rec.approx, candidate) &&
                candidate > rec.lo && candidate < rec.hi && p(candidate) == 0) {
                rec.exact = true;
                rec.exact_value = candidate;
                rec.approx = to_double(candidate);
            }
        }
        rec.multiplicity = detail::multiplicity_of(gcd_chain, rec);
    }
    return out;
}

/// Distinct real roots of p strictly inside (lo, hi); no refinement.
inline int count_real_roots(const Poly& p, const Rat& lo, const Rat& hi) {
    if (p(lo) == 0 || p(hi) == 0)
        throw std::invalid_argument("root count endpoints must not be roots");
    Poly sf = square_free_part(p);
    return count_distinct_roots(sturm_chain(sf), lo, hi);
}

} // namespace isoharm
