/**
 * @file  quadrature.hpp
 * @brief Globally adaptive Gauss-Kronrod (7/15) integration on a finite interval.
 *
 * The interval is first split into `initial_pieces` equal parts (callers use
 * this as an oscillation guard), then the piece with the largest error
 * estimate is bisected until
 *     total_error <= max(abs_tol_factor * integral|f|, rel_tol * |integral f|).
 * Error estimates follow QUADPACK's QK15 rule.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace acphase {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    /// Absolute tolerance as a fraction of the integral of |f| (the "scale").
    double abs_tol_factor = 1e-12;
    std::size_t initial_pieces = 8;
    std::size_t max_subdivisions = 2'000'000;
};

struct QuadratureResult {
    double value = 0;
    double error = 0;
    double abs_integral = 0; ///< integral of |f|, used as the tolerance scale
    std::size_t intervals = 0;
    bool converged = false;
};

namespace detail {

struct GKPiece {
    double a, b, value, error, abs_value;
    bool operator<(const GKPiece& o) const { return error < o.error; }
};

template <class F>
GKPiece gauss_kronrod15(F& f, double a, double b)
{
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * wk[7];
    double gauss = fc * wg[3];
    double abs_sum = std::fabs(kronrod);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        kronrod += wk[j] * (f1[j] + f2[j]);
        abs_sum += wk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) gauss += wg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = kronrod * 0.5;
    double asc = wk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j) asc += wk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

    const double result = kronrod * half;
    const double abs_result = abs_sum * std::fabs(half);
    asc *= std::fabs(half);
    double err = std::fabs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = 2.220446049250313e-16;
    if (abs_result > 2.2250738585072014e-308 / (50.0 * eps)) err = std::max(50.0 * eps * abs_result, err);
    return {a, b, result, err, abs_result};
}

} // namespace detail

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {})
{
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const std::size_t n0 = std::max<std::size_t>(1, opt.initial_pieces);
    std::priority_queue<detail::GKPiece> heap;
    std::vector<detail::GKPiece> initial;
    initial.reserve(n0);
    const double width = (b - a) / static_cast<double>(n0);
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == n0) ? b : a + width * static_cast<double>(i + 1);
        initial.push_back(detail::gauss_kronrod15(f, lo, hi));
    }
    double value = 0, error = 0, abs_value = 0;
    for (const auto& p : initial) {
        value += p.value;
        error += p.error;
        abs_value += p.abs_value;
        heap.push(p);
    }

    std::size_t count = n0;
    auto tolerance = [&] {
        return std::max(opt.abs_tol_factor * abs_value, opt.rel_tol * std::fabs(value));
    };
    while (error > tolerance() && count < opt.max_subdivisions) {
        const detail::GKPiece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
            heap.push(worst); // interval at floating-point resolution
            break;
        }
        const auto left = detail::gauss_kronrod15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        ++count;
    }

    // Re-sum from the pieces to shed the drift of the running updates.
    value = 0;
    error = 0;
    abs_value = 0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        abs_value += heap.top().abs_value;
        heap.pop();
    }
    out.value = value;
    out.error = error;
    out.abs_integral = abs_value;
    out.intervals = count;
    out.converged = error <= tolerance();
    return out;
}

} // namespace acphase
