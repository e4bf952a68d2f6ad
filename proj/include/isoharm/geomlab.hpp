#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isoharm/errors.hpp"

namespace isoharm::geomlab {

// Finite-difference differential geometry of explicit hypersurface charts in
// the unit sphere. Everything runs in extended precision: the nested central
// differences of the rough Laplacian lose ~h^3 of the working epsilon, which
// double precision cannot afford at the step sizes verified here.
using LD = long double;
using VecX = Eigen::Matrix<LD, Eigen::Dynamic, 1>;
using MatX = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;

// Sample box for every angle coordinate; keeps a pi/8 margin from the
// coordinate poles of the spherical parametrization.
inline constexpr LD box_lo = 0.39269908169872415481L; // pi/8
inline constexpr LD box_hi = 2.74889357189106908365L; // 7 pi/8

namespace detail {

// Spherical coordinates on S^k: k angles to k+1 Euclidean components.
inline VecX sphere_coords(const VecX& angles) {
    VecX out(angles.size() + 1);
    LD c = 1.0L;
    for (Eigen::Index i = 0; i < angles.size(); ++i) {
        out[i] = c * std::cos(angles[i]);
        c *= std::sin(angles[i]);
    }
    out[angles.size()] = c;
    return out;
}

} // namespace detail

/// An explicit chart of a hypersurface M^m inside S^{m+1}, embedded in
/// Euclidean (m+2)-space. Two kinds: geodesic spheres S^m(R) and products
/// S^{m1}(R1) x S^{m2}(R2) with R1^2 + R2^2 = 1.
struct Chart {
    enum class Kind { small_sphere, clifford_torus };

    Kind kind;
    int block1 = 0; // angle count of the first spherical factor
    int block2 = 0; // and of the second (0 for a small sphere)
    LD radius1 = 0.0L;
    LD radius2 = 0.0L;

    int dim() const { return block1 + block2; }
    int ambient_dim() const { return dim() + 2; }

    VecX map(const VecX& u) const {
        if (u.size() != dim())
            throw std::invalid_argument("chart parameter has wrong dimension");
        VecX first = detail::sphere_coords(u.head(block1));
        VecX second = detail::sphere_coords(u.tail(block2));
        VecX out(ambient_dim());
        out.head(first.size()) = radius1 * first;
        out.tail(second.size()) = radius2 * second;
        return out;
    }

    /// Default sample point, well inside the box for moderate dimensions.
    VecX center() const {
        VecX u(dim());
        for (Eigen::Index i = 0; i < u.size(); ++i)
            u[i] = 0.9L + 0.07L * LD(i);
        return u;
    }

    static Chart small_sphere(int m, LD R) {
        if (m < 1)
            throw std::invalid_argument("sphere dimension must be positive");
        if (!(R > 0.0L && R < 1.0L))
            throw std::invalid_argument("small-sphere radius must lie in (0, 1)");
        Chart chart;
        chart.kind = Kind::small_sphere;
        chart.block1 = m;
        chart.block2 = 0;
        chart.radius1 = R;
        chart.radius2 = std::sqrt(1.0L - R * R);
        return chart;
    }

    static Chart clifford_torus(int m1, int m2, LD R1, LD R2) {
        if (m1 < 1 || m2 < 1)
            throw std::invalid_argument("torus factor dimensions must be positive");
        if (!(R1 > 0.0L && R2 > 0.0L) || std::abs(R1 * R1 + R2 * R2 - 1.0L) > 1e-12L)
            throw std::invalid_argument("torus radii must satisfy R1^2 + R2^2 = 1");
        Chart chart;
        chart.kind = Kind::clifford_torus;
        chart.block1 = m1;
        chart.block2 = m2;
        chart.radius1 = R1;
        chart.radius2 = R2;
        return chart;
    }
};

struct FundamentalForms {
    MatX metric;
    MatX second;
    VecX shape_eigenvalues; // ascending
    LD f = 0.0L;
    LD a2 = 0.0L;
};

namespace detail {

inline void require_margin(const Chart& chart, const VecX& u, LD h, int reach) {
    if (!(h > 0.0L))
        throw std::invalid_argument("step h must be positive");
    if (u.size() != chart.dim())
        throw std::invalid_argument("chart parameter has wrong dimension");
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u[i] - reach * h < box_lo || u[i] + reach * h > box_hi)
            throw std::domain_error(
                "sample point too close to the chart box boundary for the stencil");
}

inline VecX tangent(const Chart& chart, const VecX& u, LD h, int i) {
    VecX up = u, dn = u;
    up[i] += h;
    dn[i] -= h;
    return (chart.map(up) - chart.map(dn)) / (2.0L * h);
}

inline MatX tangent_frame(const Chart& chart, const VecX& u, LD h) {
    MatX t(chart.ambient_dim(), chart.dim());
    for (int i = 0; i < chart.dim(); ++i)
        t.col(i) = tangent(chart, u, h, i);
    return t;
}

// Unit normal of the hypersurface inside the sphere: the seed axis projected
// off the tangent frame and the ambient position, normalized. The seed and a
// global sign are frozen per chart so the normal is a smooth field.
struct NormalFrame {
    int axis = 0;
    int sign = 1;
};

inline VecX normal_raw(const Chart& chart, const VecX& u, LD h, int axis) {
    MatX t = tangent_frame(chart, u, h);
    VecX p = chart.map(u);
    int n = chart.ambient_dim();
    MatX basis(n, chart.dim() + 1);
    basis.leftCols(chart.dim()) = t;
    basis.col(chart.dim()) = p;
    // modified Gram-Schmidt on the spanning set
    for (int c = 0; c < basis.cols(); ++c) {
        for (int prev = 0; prev < c; ++prev)
            basis.col(c) -= basis.col(prev).dot(basis.col(c)) * basis.col(prev);
        LD norm = basis.col(c).norm();
        if (norm < 1e-12L)
            throw discretization_error("tangent frame degenerated during orthonormalization");
        basis.col(c) /= norm;
    }
    VecX v = VecX::Zero(n);
    v[axis] = 1.0L;
    for (int pass = 0; pass < 2; ++pass)
        for (int c = 0; c < basis.cols(); ++c)
            v -= basis.col(c).dot(v) * basis.col(c);
    LD norm = v.norm();
    if (norm < 1e-6L)
        throw discretization_error("normal seed axis lies in the tangent span");
    return v / norm;
}

inline MatX second_form(const Chart& chart, const VecX& u, LD h, const NormalFrame& frame,
                        const MatX& t) {
    int m = chart.dim();
    MatX b(m, m);
    for (int i = 0; i < m; ++i) {
        VecX up = u, dn = u;
        up[i] += h;
        dn[i] -= h;
        VecX deta = LD(frame.sign) *
                    (normal_raw(chart, up, h, frame.axis) - normal_raw(chart, dn, h, frame.axis)) /
                    (2.0L * h);
        for (int j = 0; j < m; ++j)
            b(i, j) = -deta.dot(t.col(j));
    }
    return ((b + b.transpose()) / 2.0L).eval();
}

inline NormalFrame choose_frame(const Chart& chart) {
    const LD h = 1e-3L;
    VecX u = chart.center();
    MatX t = tangent_frame(chart, u, h);
    VecX p = chart.map(u);
    int n = chart.ambient_dim();

    Eigen::HouseholderQR<MatX> qr;
    MatX span(n, chart.dim() + 1);
    span.leftCols(chart.dim()) = t;
    span.col(chart.dim()) = p;
    qr.compute(span);
    MatX q = qr.householderQ() * MatX::Identity(n, chart.dim() + 1);

    NormalFrame frame;
    LD best = -1.0L;
    for (int axis = 0; axis < n; ++axis) {
        VecX e = VecX::Zero(n);
        e[axis] = 1.0L;
        LD residual = (e - q * (q.transpose() * e)).norm();
        if (residual > best) {
            best = residual;
            frame.axis = axis;
        }
    }

    // orientation: positive determinant of (tangents, position, normal)
    VecX eta = normal_raw(chart, u, h, frame.axis);
    MatX full(n, n);
    full.leftCols(chart.dim()) = t;
    full.col(chart.dim()) = p;
    full.col(chart.dim() + 1) = eta;
    if (full.determinant() < 0.0L)
        frame.sign = -frame.sign;

    // then a global flip so the mean curvature is nonnegative when it is
    // nonzero, matching the closed-form conventions
    MatX g = t.transpose() * t;
    MatX b = second_form(chart, u, h, frame, t);
    LD trace = (g.inverse() * b).trace();
    if (trace < -1e-10L)
        frame.sign = -frame.sign;
    return frame;
}

} // namespace detail

/// First and second fundamental forms at u from order-2 central differences,
/// with the shape spectrum of g^{ -1} b and the derived invariants.
inline FundamentalForms fundamental_forms(const Chart& chart, const VecX& u, LD h) {
    detail::require_margin(chart, u, h, 2);
    detail::NormalFrame frame = detail::choose_frame(chart);
    MatX t = detail::tangent_frame(chart, u, h);
    FundamentalForms forms;
    forms.metric = t.transpose() * t;

    Eigen::SelfAdjointEigenSolver<MatX> metric_eigs(forms.metric);
    LD lo = metric_eigs.eigenvalues().minCoeff();
    LD hi = metric_eigs.eigenvalues().maxCoeff();
    if (!(lo > 0.0L) || hi / lo > 1e8L)
        throw discretization_error("metric condition number exceeds 1e8 at the sample point");

    forms.second = detail::second_form(chart, u, h, frame, t);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> shape(forms.second, forms.metric);
    forms.shape_eigenvalues = shape.eigenvalues();
    int m = chart.dim();
    forms.f = forms.shape_eigenvalues.sum() / m;
    forms.a2 = forms.shape_eigenvalues.squaredNorm();
    return forms;
}

namespace detail {

using Key = std::vector<int>;

inline VecX lattice_point(const VecX& u0, LD h, const Key& k) {
    VecX u = u0;
    for (std::size_t i = 0; i < k.size(); ++i)
        u[static_cast<Eigen::Index>(i)] += h * k[i];
    return u;
}

inline Key shifted(Key k, int i, int d) {
    k[static_cast<std::size_t>(i)] += d;
    return k;
}

// Vector field on the lattice around u0, memoized by integer offsets: the
// nested stencils of the iterated Laplacian revisit points heavily.
struct CachedField {
    std::function<VecX(const Key&)> eval;
    std::map<Key, VecX> cache;

    const VecX& operator()(const Key& k) {
        auto it = cache.find(k);
        if (it == cache.end())
            it = cache.emplace(k, eval(k)).first;
        return it->second;
    }
};

/// Rough (connection) Laplacian of a vector field along the immersion,
/// evaluated at lattice offset `base`: -g^{ij} (nabla_i nabla_j - Gamma^k_ij
/// nabla_k) applied to the field, where nabla projects the ambient derivative
/// onto the sphere's tangent space. The sign follows the d*d convention.
inline VecX rough_laplacian(const Chart& chart, CachedField& field, const VecX& u0, LD h,
                            const Key& base) {
    int m = chart.dim();
    int n = chart.ambient_dim();

    auto project = [&](const VecX& position, const VecX& v) {
        return (v - position.dot(v) * position).eval();
    };

    std::map<std::pair<int, Key>, VecX> first_derivs;
    auto covariant = [&](int j, const Key& k) -> const VecX& {
        auto probe = first_derivs.find({j, k});
        if (probe != first_derivs.end())
            return probe->second;
        VecX dv = (field(shifted(k, j, +1)) - field(shifted(k, j, -1))) / (2.0L * h);
        VecX position = chart.map(lattice_point(u0, h, k));
        return first_derivs.emplace(std::make_pair(j, k), project(position, dv)).first->second;
    };

    auto metric_at = [&](const Key& k) {
        MatX t = tangent_frame(chart, lattice_point(u0, h, k), h);
        return (t.transpose() * t).eval();
    };

    MatX g = metric_at(base);
    MatX ginv = g.inverse();

    std::vector<MatX> dg(m);
    for (int k = 0; k < m; ++k)
        dg[k] = (metric_at(shifted(base, k, +1)) - metric_at(shifted(base, k, -1))) / (2.0L * h);

    // Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    std::vector<MatX> gamma(m, MatX::Zero(m, m));
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                LD sum = 0.0L;
                for (int l = 0; l < m; ++l)
                    sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = sum / 2.0L;
            }

    VecX position = chart.map(lattice_point(u0, h, base));
    VecX acc = VecX::Zero(n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            VecX dw = (covariant(j, shifted(base, i, +1)) - covariant(j, shifted(base, i, -1))) /
                      (2.0L * h);
            VecX second = project(position, dw);
            for (int k = 0; k < m; ++k)
                second -= gamma[k](i, j) * covariant(k, base);
            acc += ginv(i, j) * second;
        }
    return -acc;
}

struct FrozenInvariants {
    NormalFrame frame;
    LD f0 = 0.0L;
    LD a20 = 0.0L;
};

// Freeze the mean curvature and |A|^2 at the chart center after checking
// they really are constant: the verified fields are f0 * eta, never the
// pointwise-recomputed f, whose numerical noise would be amplified by h^-3.
inline FrozenInvariants freeze_invariants(const Chart& chart, const VecX& u, LD h) {
    FrozenInvariants frozen;
    frozen.frame = choose_frame(chart);
    FundamentalForms at_center = fundamental_forms(chart, chart.center(), h);
    FundamentalForms at_u = fundamental_forms(chart, u, h);
    if (std::abs(at_center.f - at_u.f) > 1e-8L ||
        std::abs(at_center.a2 - at_u.a2) > 1e-8L)
        throw std::invalid_argument("chart invariants are not constant; not a CMC family member");
    frozen.f0 = at_center.f;
    frozen.a20 = at_center.a2;
    return frozen;
}

} // namespace detail

/// Residual of the mean-curvature Laplacian identity for a CMC chart with
/// constant |A|^2: the rough Laplacian of H = f eta minus f |A|^2 eta,
/// which vanishes to the stencil order O(h^2).
inline VecX verify_mean_curvature_laplacian(const Chart& chart, const VecX& u, LD h) {
    detail::require_margin(chart, u, h, 3);
    detail::FrozenInvariants frozen = detail::freeze_invariants(chart, u, h);
    detail::CachedField H;
    H.eval = [&](const detail::Key& k) {
        VecX x = detail::lattice_point(u, h, k);
        return (frozen.f0 * LD(frozen.frame.sign) *
                detail::normal_raw(chart, x, h, frozen.frame.axis))
            .eval();
    };
    detail::Key base(static_cast<std::size_t>(chart.dim()), 0);
    VecX lap = detail::rough_laplacian(chart, H, u, h, base);
    VecX eta = LD(frozen.frame.sign) * detail::normal_raw(chart, u, h, frozen.frame.axis);
    return lap - frozen.f0 * frozen.a20 * eta;
}

/// Residual of the iterated identity: the p-fold rough Laplacian of H minus
/// f |A|^{2p} eta. Only p = 1, 2 are supported; each iteration costs a factor
/// h^2 of accuracy, so deeper iterates verify nothing at usable steps.
inline VecX verify_power_law(const Chart& chart, int p, const VecX& u, LD h) {
    if (p < 1 || p > 2)
        throw unsupported_error("power-law verification supports p = 1 and p = 2 only");
    if (p == 1)
        return verify_mean_curvature_laplacian(chart, u, h);
    detail::require_margin(chart, u, h, 5);
    detail::FrozenInvariants frozen = detail::freeze_invariants(chart, u, h);
    detail::CachedField H;
    H.eval = [&](const detail::Key& k) {
        VecX x = detail::lattice_point(u, h, k);
        return (frozen.f0 * LD(frozen.frame.sign) *
                detail::normal_raw(chart, x, h, frozen.frame.axis))
            .eval();
    };
    detail::CachedField once;
    once.eval = [&](const detail::Key& k) {
        return detail::rough_laplacian(chart, H, u, h, k);
    };
    detail::Key base(static_cast<std::size_t>(chart.dim()), 0);
    VecX lap2 = detail::rough_laplacian(chart, once, u, h, base);
    VecX eta = LD(frozen.frame.sign) * detail::normal_raw(chart, u, h, frozen.frame.axis);
    return lap2 - frozen.f0 * frozen.a20 * frozen.a20 * eta;
}

/// The r-harmonicity residual evaluated from numerically measured invariants:
/// true iff |A|^4 - m |A|^2 - (r-2) m^2 f^2 vanishes within 1e-6 of the scale.
inline bool check_criterion_on_chart(const Chart& chart, int r, LD h = 1e-3L) {
    if (r < 2)
        throw std::invalid_argument("order r must be at least 2");
    VecX center = chart.center();
    LD f = 0.0L, a2 = 0.0L;
    LD f_min = 0.0L, f_max = 0.0L, a2_min = 0.0L, a2_max = 0.0L;
    for (int sample = -2; sample <= 2; ++sample) {
        VecX u = (center.array() + 0.03L * LD(sample)).matrix();
        FundamentalForms forms = fundamental_forms(chart, u, h);
        if (sample == -2) {
            f_min = f_max = forms.f;
            a2_min = a2_max = forms.a2;
        } else {
            f_min = std::min(f_min, forms.f);
            f_max = std::max(f_max, forms.f);
            a2_min = std::min(a2_min, forms.a2);
            a2_max = std::max(a2_max, forms.a2);
        }
        if (sample == 0) {
            f = forms.f;
            a2 = forms.a2;
        }
    }
    if (f_max - f_min > 1e-6L || a2_max - a2_min > 1e-6L)
        throw std::invalid_argument("chart invariants are not constant; criterion undefined");
    LD m = chart.dim();
    LD value = a2 * a2 - m * a2 - LD(r - 2) * m * m * f * f;
    return std::abs(value) < 1e-6L * std::max(LD(1), a2 * a2);
}

struct GeomReport {
    std::vector<VecX> points;
    std::vector<FundamentalForms> forms;
    LD f = 0.0L;  // center values
    LD a2 = 0.0L;
    LD f_spread = 0.0L;
    LD a2_spread = 0.0L;
    LD max_unit_deviation = 0.0L;
};

/// Invariants sampled along a diagonal segment of the box, with constancy
/// spreads and the worst deviation of the chart image from the unit sphere.
inline GeomReport sample_report(const Chart& chart, LD h, int samples = 5) {
    if (samples < 2)
        throw std::invalid_argument("need at least two samples");
    GeomReport report;
    VecX center = chart.center();
    LD f_min = 0.0L, f_max = 0.0L, a2_min = 0.0L, a2_max = 0.0L;
    for (int i = 0; i < samples; ++i) {
        LD offset = -0.08L + 0.16L * LD(i) / LD(samples - 1);
        VecX u = (center.array() + offset).matrix();
        report.max_unit_deviation =
            std::max(report.max_unit_deviation, std::abs(chart.map(u).norm() - 1.0L));
        FundamentalForms forms = fundamental_forms(chart, u, h);
        if (i == 0) {
            f_min = f_max = forms.f;
            a2_min = a2_max = forms.a2;
        } else {
            f_min = std::min(f_min, forms.f);
            f_max = std::max(f_max, forms.f);
            a2_min = std::min(a2_min, forms.a2);
            a2_max = std::max(a2_max, forms.a2);
        }
        report.points.push_back(u);
        report.forms.push_back(std::move(forms));
    }
    report.f = report.forms[static_cast<std::size_t>(samples / 2)].f;
    report.a2 = report.forms[static_cast<std::size_t>(samples / 2)].a2;
    report.f_spread = f_max - f_min;
    report.a2_spread = a2_max - a2_min;
    return report;
}

} // namespace isoharm::geomlab
