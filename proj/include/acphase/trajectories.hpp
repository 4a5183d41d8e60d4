/**
 * @file  trajectories.hpp
 * @brief Two-arm spacetime loops: diamond, ellipse, asymmetric composite, guide crossing.
 *
 * Every segment is parametrized on u in [0, 1] and carries its analytic
 * derivative. Loop orientation is path1 followed by reversed path2 (C1 - C2).
 * All paths lie in the plane y = 0.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acphase/errors.hpp"
#include "acphase/fields.hpp"
#include "acphase/quadrature.hpp"
#include "acphase/vec.hpp"

namespace acphase {

struct Segment {
    std::function<Vec4(double)> position;
    std::function<Vec4(double)> tangent; ///< d position / du
    std::string label;

    Vec4 start() const { return position(0.0); }
    Vec4 end() const { return position(1.0); }
};

/// Straight segment from `a` to `b`.
inline Segment linear_segment(const Vec4& a, const Vec4& b, std::string label)
{
    const Vec4 delta = b - a;
    return {[a, delta](double u) { return a + delta * u; }, [delta](double) { return delta; },
            std::move(label)};
}

/// The same curve traversed as u -> g(u), with g monotone from [0,1] onto [0,1].
inline Segment reparametrized(const Segment& s, std::function<double(double)> g,
                              std::function<double(double)> dg)
{
    return {[pos = s.position, g](double u) { return pos(g(u)); },
            [tan = s.tangent, g, dg](double u) { return tan(g(u)) * dg(u); }, s.label + "~"};
}

struct InterferenceLoop {
    std::vector<Segment> path1; ///< C1
    std::vector<Segment> path2; ///< C2
    std::string kind;
    double alpha = 0;      ///< half the maximum transverse separation
    double speed = 0;      ///< v (fraction of c)
    double arm_length = 0; ///< s for the diamond, s' for the ellipse, b for the guide

    Vec4 start1() const { return path1.front().start(); }
    Vec4 end1() const { return path1.back().end(); }
    Vec4 start2() const { return path2.front().start(); }
    Vec4 end2() const { return path2.back().end(); }

    /// Largest mismatch of the shared start/end events.
    double closure_error() const
    {
        return std::max(max_abs_diff(start1(), start2()), max_abs_diff(end1(), end2()));
    }

    /// Largest gap between consecutive segment endpoints along either path.
    double continuity_error() const
    {
        double worst = 0;
        for (const auto* path : {&path1, &path2})
            for (std::size_t i = 1; i < path->size(); ++i)
                worst = std::max(worst, max_abs_diff((*path)[i - 1].end(), (*path)[i].start()));
        return worst;
    }

    /// max z on C1 minus min z on C2, sampled.
    double sampled_separation(int samples_per_segment = 257) const
    {
        double zmax = -1e300, zmin = 1e300;
        for (const auto& s : path1)
            for (int i = 0; i < samples_per_segment; ++i)
                zmax = std::max(zmax, s.position(double(i) / (samples_per_segment - 1)).z);
        for (const auto& s : path2)
            for (int i = 0; i < samples_per_segment; ++i)
                zmin = std::min(zmin, s.position(double(i) / (samples_per_segment - 1)).z);
        return zmax - zmin;
    }

    InterferenceLoop swapped() const
    {
        InterferenceLoop out = *this;
        std::swap(out.path1, out.path2);
        return out;
    }
};

namespace detail {

inline void require_positive(double v, const char* name)
{
    if (!(v > 0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive (got " + std::to_string(v) + ")");
}

inline void require_non_negative(double v, const char* name)
{
    if (!(v >= 0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be non-negative (got " + std::to_string(v) + ")");
}

/// Half-ellipse arc (tau sin w, h sin w, 0, sign*alpha cos w), w = -pi/2 + pi u.
inline Segment ellipse_arc(double tau, double halfspan, double alpha, double sign, std::string label)
{
    constexpr double pi = std::numbers::pi;
    return {[=](double u) {
                const double w = -pi / 2 + pi * u;
                return Vec4{tau * std::sin(w), halfspan * std::sin(w), 0.0, sign * alpha * std::cos(w)};
            },
            [=](double u) {
                const double w = -pi / 2 + pi * u;
                return Vec4{tau * std::cos(w), halfspan * std::cos(w), 0.0, -sign * alpha * std::sin(w)} * pi;
            },
            std::move(label)};
}

/// Lower (sign = -1) or upper (+1) arm of the diamond.
inline std::vector<Segment> diamond_arm(double T, double theta, double d, double l, double alpha,
                                        double sign, int first_index)
{
    const double z = sign * alpha;
    const Vec4 p0{-T / 2 - theta, -d - l, 0, 0};
    const Vec4 p1{-T / 2, -d, 0, z};
    const Vec4 p2{T / 2, d, 0, z};
    const Vec4 p3{T / 2 + theta, d + l, 0, 0};
    auto name = [&](int k) { return "sigma" + std::to_string(first_index + k); };
    return {linear_segment(p0, p1, name(0)), linear_segment(p1, p2, name(1)),
            linear_segment(p2, p3, name(2))};
}

} // namespace detail

/// Arc length of a path's spatial projection (adaptive quadrature of |dx/du|).
inline double spatial_length(const std::vector<Segment>& path)
{
    double total = 0;
    for (const auto& s : path) {
        auto speed = [&s](double u) { return norm(s.tangent(u).spatial()); };
        QuadratureOptions opt;
        opt.rel_tol = 1e-13;
        opt.abs_tol_factor = 1e-14;
        total += integrate(speed, 0.0, 1.0, opt).value;
    }
    return total;
}

/**
 * Six-segment loop: C1 = sigma1..sigma3 (z >= 0), C2 = sigma4..sigma6 (z <= 0).
 * sigma1(u) = (-T/2 - theta + theta u, -d - l + u l, 0, u alpha), etc.
 * speed = s / theta with s = sqrt(alpha^2 + l^2).
 */
inline InterferenceLoop make_diamond(double T, double theta, double d, double l, double alpha)
{
    detail::require_positive(T, "T");
    detail::require_positive(theta, "theta");
    detail::require_positive(d, "d");
    detail::require_positive(l, "l");
    detail::require_non_negative(alpha, "alpha");
    InterferenceLoop loop;
    loop.path1 = detail::diamond_arm(T, theta, d, l, alpha, +1.0, 1);
    loop.path2 = detail::diamond_arm(T, theta, d, l, alpha, -1.0, 4);
    loop.kind = "diamond";
    loop.alpha = alpha;
    loop.arm_length = std::hypot(alpha, l);
    loop.speed = loop.arm_length / theta;
    return loop;
}

/**
 * Mirror-image elliptical arcs sigma(w) = (tau sin w, h sin w, 0, +-alpha cos w),
 * w in [-pi/2, pi/2], h = d + l. arm_length = s' (numerical arc length), speed = s'/tau.
 */
inline InterferenceLoop make_ellipse(double tau, double halfspan, double alpha)
{
    detail::require_positive(tau, "tau");
    detail::require_positive(halfspan, "halfspan");
    detail::require_non_negative(alpha, "alpha");
    InterferenceLoop loop;
    loop.path1 = {detail::ellipse_arc(tau, halfspan, alpha, +1.0, "ellipse+")};
    loop.path2 = {detail::ellipse_arc(tau, halfspan, alpha, -1.0, "ellipse-")};
    loop.kind = "ellipse";
    loop.alpha = alpha;
    loop.arm_length = spatial_length(loop.path1);
    loop.speed = loop.arm_length / tau;
    return loop;
}

/**
 * Upper arm: elliptical arc of half-span d + l and height alpha over t in [-tau, tau].
 * Lower arm: diamond segments sigma4..sigma6 reaching z = -lower_alpha.
 * The arms share endpoints only if tau == T/2 + theta.
 */
inline InterferenceLoop make_asymmetric(double tau, double T, double theta, double d, double l,
                                        double alpha, std::optional<double> lower_alpha = std::nullopt)
{
    detail::require_positive(tau, "tau");
    detail::require_positive(T, "T");
    detail::require_positive(theta, "theta");
    detail::require_positive(d, "d");
    detail::require_positive(l, "l");
    detail::require_non_negative(alpha, "alpha");
    const double lower = lower_alpha.value_or(alpha);
    detail::require_non_negative(lower, "lower_alpha");
    const double mismatch = tau - (T / 2 + theta);
    if (std::fabs(mismatch) > 1e-12 * std::max(tau, T / 2 + theta))
        throw DomainError("make_asymmetric: arms do not share endpoints; elliptic arm ends at t = +-" +
                          std::to_string(tau) + " but the straight arm ends at t = +-" +
                          std::to_string(T / 2 + theta) + " (mismatch " + std::to_string(mismatch) +
                          "); require tau = T/2 + theta");
    InterferenceLoop loop;
    loop.path1 = {detail::ellipse_arc(tau, d + l, alpha, +1.0, "ellipse+")};
    loop.path2 = detail::diamond_arm(T, theta, d, l, lower, -1.0, 4);
    loop.kind = "asymmetric";
    loop.alpha = std::max(alpha, lower);
    loop.arm_length = std::hypot(lower, l);
    loop.speed = loop.arm_length / theta;
    return loop;
}

/**
 * Straight crossing of a guide: both particles run at y = 0 from x = +b/2 to x = -b/2
 * during t in [-T/2, T/2], at constant z = z1 (C1) and z = z2 (C2). Default offsets
 * (alpha, -alpha) straddle the node plane z = 0 of the literal mode functions.
 */
inline InterferenceLoop make_guide_crossing(double T, const WaveguideMode& guide, double alpha,
                                            std::optional<std::pair<double, double>> z_offsets = std::nullopt)
{
    detail::require_positive(T, "T");
    detail::require_non_negative(alpha, "alpha");
    const auto [z1, z2] = z_offsets.value_or(std::pair{alpha, -alpha});
    for (double z : {z1, z2})
        if (!(std::fabs(z) <= 0.5 * guide.a()))
            throw DomainError("make_guide_crossing: offset z = " + std::to_string(z) +
                              " lies outside the guide (|z| <= a/2 = " + std::to_string(0.5 * guide.a()) + ")");
    const double hb = 0.5 * guide.b();
    InterferenceLoop loop;
    loop.path1 = {linear_segment({-T / 2, hb, 0, z1}, {T / 2, -hb, 0, z1}, "guide1")};
    loop.path2 = {linear_segment({-T / 2, hb, 0, z2}, {T / 2, -hb, 0, z2}, "guide2")};
    loop.kind = "guide";
    loop.alpha = 0.5 * std::fabs(z1 - z2);
    loop.arm_length = guide.b();
    loop.speed = guide.b() / T;
    return loop;
}

} // namespace acphase
