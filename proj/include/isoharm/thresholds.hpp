#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "isoharm/criterion.hpp"
#include "isoharm/quartic.hpp"
#include "isoharm/sturm.hpp"

namespace isoharm {

/// Critical orders of a degree-4 family with multiplicity ratio b: the least
/// r admitting one proper r-harmonic member (rstar) and the least admitting
/// four (rstarstar), together with the minimizers behind them and closed-form
/// upper bounds.
struct ThresholdReport {
    Rat b;
    Rat y0;            // pole of the ratio, b/(1+b)
    double y1 = 0.0;   // minimizer on (0, y0)
    double y2 = 0.0;   // minimizer on (y0, 1)
    double R1 = 0.0;
    double R2 = 0.0;
    double Rstar = 0.0;
    double Rstarstar = 0.0;
    std::int64_t rstar = 0;
    std::int64_t rstarstar = 0;
    Rat bound_rstar_value;     // exact 1 + 8(b^2+6b+10)/(b(b+2))
    Rat bound_rstarstar_value; // exact 1 + (8+48b+80b^2)/(1+2b)
    std::int64_t bound_rstar = 0;
    std::int64_t bound_rstarstar = 0;
    bool near_integer = false; // a minimum landed within 1e-6 of an integer
};

namespace thresholds {

/// R(y) = Q_b(y) / R_b(y), exact. The order r makes the quartic negative
/// somewhere iff r exceeds the minimum of this ratio on the subinterval.
inline Rat ratio(const Rat& b, const Rat& y) {
    quartic::require_ratio(b);
    if (!(y > 0 && y < 1))
        throw std::domain_error("ratio is defined on the open interval (0, 1)");
    Rat denom = quartic::r_part(b)(y);
    if (denom == 0)
        throw std::domain_error("ratio has a pole at y0 = b/(1+b)");
    return quartic::q_part(b)(y) / denom;
}

/// Ratio at a floating point, evaluated through exact rational arithmetic:
/// near y = 1 the denominator cancels catastrophically in doubles for large b
/// (coefficients ~b^2 against values ~1e-5), which is enough to corrupt the
/// derived integer order.
inline double ratio_at(const Rat& b, double y) {
    return to_double(ratio(b, Rat(y)));
}

struct UpperBounds {
    Rat rstar_value;
    Rat rstarstar_value;
    std::int64_t rstar;
    std::int64_t rstarstar;
};

/// Closed-form bounds from evaluating the ratio at y0/2 and (1+y0)/2.
inline UpperBounds upper_bounds(const Rat& b) {
    if (!(b >= 1))
        throw std::invalid_argument("upper bounds expect b >= 1");
    UpperBounds out;
    out.rstar_value = 1 + Rat(8) * (b * b + 6 * b + 10) / (b * (b + 2));
    out.rstarstar_value = 1 + (8 + 48 * b + 80 * b * b) / (1 + 2 * b);
    out.rstar = floor_int(out.rstar_value - 1).convert_to<std::int64_t>() + 1;
    out.rstarstar = floor_int(out.rstarstar_value - 1).convert_to<std::int64_t>() + 1;
    return out;
}

namespace detail {

inline std::int64_t integer_order(double value, bool& near_flag) {
    double rounded = std::round(value);
    if (std::abs(value - rounded) < 1e-6)
        near_flag = true;
    if (std::abs(value - rounded) < 1e-9 * std::max(1.0, value))
        return static_cast<std::int64_t>(rounded);
    return static_cast<std::int64_t>(std::floor(value)) + 1;
}

} // namespace detail

/// Exact critical-point minimization of the ratio on (0, y0) and (y0, 1).
/// The derivative numerator N = Q'R - QR' carries the factor (b+1)y - b
/// vanishing at the pole; the cofactor's roots are isolated by Sturm counts
/// and refined, and the ratio is evaluated at each.
inline ThresholdReport minimize(const Rat& b) {
    if (!(b >= 1))
        throw std::invalid_argument("threshold search expects b >= 1");
    ThresholdReport report;
    report.b = b;
    report.y0 = quartic::y_zero(b);

    Poly q = quartic::q_part(b);
    Poly rp = quartic::r_part(b);
    Poly num = q.derivative() * rp - q * rp.derivative();
    Poly pole_factor{-b, b + 1}; // (b+1) y - b
    auto [cofactor, rem] = Poly::divmod(num, pole_factor);
    if (!rem.is_zero())
        throw std::logic_error("derivative numerator lost its pole factor");

    auto pick_min = [&](const Rat& lo, const Rat& hi, double& y_min) {
        double best = 0.0;
        bool have = false;
        for (const auto& root : isolate_real_roots(cofactor, lo, hi)) {
            Rat point = root.exact ? root.exact_value : Rat(root.approx);
            double value = to_double(ratio(b, point));
            if (!have || value < best) {
                best = value;
                y_min = root.approx;
                have = true;
            }
        }
        if (!have)
            throw std::logic_error("no interior critical point of the ratio found");
        return best;
    };
    report.R1 = pick_min(Rat(0), report.y0, report.y1);
    report.R2 = pick_min(report.y0, Rat(1), report.y2);

    report.Rstar = std::min(report.R1, report.R2);
    report.Rstarstar = std::max(report.R1, report.R2);
    report.rstar = detail::integer_order(report.Rstar, report.near_integer);
    report.rstarstar = detail::integer_order(report.Rstarstar, report.near_integer);

    UpperBounds bounds = upper_bounds(b);
    report.bound_rstar_value = bounds.rstar_value;
    report.bound_rstarstar_value = bounds.rstarstar_value;
    report.bound_rstar = bounds.rstar;
    report.bound_rstarstar = bounds.rstarstar;
    return report;
}

struct BruteForceThresholds {
    std::int64_t rstar = 0;
    std::optional<std::int64_t> rstarstar; // absent when r_max stops the search early
};

/// Independent check of minimize: scan the residual for each order until the
/// first negative dip and the first four roots appear. A tangency bracket
/// counts as a double root. r_max must cover at least the rstar bound; the
/// rstarstar search is allowed to stop early at r_max.
inline BruteForceThresholds brute_force_thresholds(const IsoparametricFamily& fam,
                                                   int r_max,
                                                   std::size_t grid_size = 200000) {
    if (fam.degree != 4)
        throw unsupported_error("threshold scan applies to degree-4 families");
    Rat b(fam.m2, fam.m1);
    if (!(b >= 1))
        throw std::invalid_argument("threshold scan expects m2 >= m1");
    UpperBounds bounds = upper_bounds(b);
    if (r_max < bounds.rstar)
        throw std::invalid_argument("r_max = " + std::to_string(r_max) +
                                    " below the rstar bound " +
                                    std::to_string(bounds.rstar));
    BruteForceThresholds out;
    bool found_first = false;
    for (int r = 2; r <= r_max; ++r) {
        ScanResult scan = scan_residual(fam, r, grid_size);
        bool negative = false;
        for (const auto& sample : scan.samples) {
            if (sample.value < 0.0) {
                negative = true;
                break;
            }
        }
        int roots = 0;
        for (const auto& bracket : scan.brackets)
            roots += bracket.tangency ? 2 : 1;
        if (!found_first && (negative || roots > 0)) {
            out.rstar = r;
            found_first = true;
        }
        if (roots >= 4) {
            out.rstarstar = r;
            break;
        }
    }
    if (!found_first)
        throw verification_error("no negative residual up to r_max; threshold scan failed");
    return out;
}

} // namespace thresholds
} // namespace isoharm
