/**
 * @file  phase_engine.hpp
 * @brief Loop phase by quadrature, (A, B) extraction, J0 visibility, Monte-Carlo check.
 *
 * Sign convention: phi(t0) = - sum_{C1} int a.dx + sum_{C2} int a.dx, i.e.
 * phi = -oint_{C1 - C2} a_nu dx^nu with componentwise pairing.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "acphase/errors.hpp"
#include "acphase/fields.hpp"
#include "acphase/quadrature.hpp"
#include "acphase/rng.hpp"
#include "acphase/special_functions.hpp"
#include "acphase/trajectories.hpp"

namespace acphase {

struct PhaseOptions {
    double rel_tol = 1e-10;
    double abs_tol_factor = 1e-12;
    std::size_t max_subdivisions = 4'000'000;
    /// Minimum GK pieces per field period along a segment.
    double pieces_per_period = 8.0;
};

struct LoopPhaseResult {
    double value = 0;
    double error = 0;       ///< summed quadrature error estimates
    double abs_scale = 0;   ///< sum over segments of integral |a.dx/du|
};

namespace detail {

/// Sum of coordinate excursions along a segment, sampled; bounds the phase advance.
inline double segment_extent(const Segment& s)
{
    constexpr int steps = 16;
    double extent = 0;
    Vec4 prev = s.position(0.0);
    for (int i = 1; i <= steps; ++i) {
        const Vec4 cur = s.position(double(i) / steps);
        const Vec4 d = cur - prev;
        extent += std::fabs(d.t) + std::fabs(d.x) + std::fabs(d.y) + std::fabs(d.z);
        prev = cur;
    }
    return extent;
}

} // namespace detail

inline LoopPhaseResult loop_phase_detailed(const InterferenceLoop& loop, const Connection& conn,
                                           double t0, const PhaseOptions& opt = {})
{
    const double omega = frequency(conn.field);
    LoopPhaseResult out;
    int index = 0;
    auto run = [&](const std::vector<Segment>& path, double sign) {
        for (const auto& seg : path) {
            auto integrand = [&](double u) { return contract(conn(seg.position(u), t0), seg.tangent(u)); };
            QuadratureOptions q;
            q.rel_tol = opt.rel_tol;
            q.abs_tol_factor = opt.abs_tol_factor;
            q.max_subdivisions = opt.max_subdivisions;
            const double periods = omega * detail::segment_extent(seg) / (2.0 * std::numbers::pi);
            q.initial_pieces = static_cast<std::size_t>(std::max(8.0, std::ceil(opt.pieces_per_period * periods)));
            const QuadratureResult r = integrate(integrand, 0.0, 1.0, q);
            if (!r.converged)
                throw NumericalError("loop_phase: quadrature did not converge on segment " +
                                         std::to_string(index) + " (" + seg.label + "), error estimate " +
                                         std::to_string(r.error),
                                     index, r.error);
            out.value += sign * r.value;
            out.error += r.error;
            out.abs_scale += r.abs_integral;
            ++index;
        }
    };
    run(loop.path1, -1.0);
    run(loop.path2, +1.0);
    return out;
}

/// phi(t0) for one emission time.
inline double loop_phase(const InterferenceLoop& loop, const Connection& conn, double t0,
                         const PhaseOptions& opt = {})
{
    return loop_phase_detailed(loop, conn, t0, opt).value;
}

struct PhaseCoefficients {
    double A = 0;
    double B = 0;
    double Cmag = 0;

    static PhaseCoefficients from(double a, double b) { return {a, b, std::hypot(a, b)}; }
};

struct ExtractionReport {
    PhaseCoefficients coeffs;
    double fit_residual = 0;     ///< RMS deviation of the 8 samples from A cos + B sin
    double quadrature_error = 0; ///< largest per-evaluation error estimate
    double abs_scale = 0;        ///< largest integral of |a.dx| over the samples
};

/**
 * A = phi(0), B = phi(pi / (2 w)); phi is also sampled at 8 equally spaced t0 over one
 * period and must follow A cos(w t0) + B sin(w t0) to 1e-8 |C| (or the quadrature noise).
 */
inline ExtractionReport extract_AB_detailed(const InterferenceLoop& loop, const Connection& conn,
                                            std::optional<double> omega_in = std::nullopt,
                                            const PhaseOptions& opt = {})
{
    const double field_omega = frequency(conn.field);
    if (!(field_omega > 0))
        throw ConfigError("extract_AB requires a monochromatic (non-static) field");
    const double omega = omega_in.value_or(field_omega);
    if (std::fabs(omega - field_omega) > 1e-12 * field_omega)
        throw ConfigError("extract_AB: omega does not match the field frequency");

    constexpr int n = 8;
    std::array<double, n> phi{};
    ExtractionReport rep;
    for (int k = 0; k < n; ++k) {
        const double t0 = 2.0 * std::numbers::pi * k / (n * omega);
        const auto r = loop_phase_detailed(loop, conn, t0, opt);
        phi[k] = r.value;
        rep.quadrature_error = std::max(rep.quadrature_error, r.error);
        rep.abs_scale = std::max(rep.abs_scale, r.abs_scale);
    }
    rep.coeffs = PhaseCoefficients::from(phi[0], phi[2]);
    double ss = 0;
    for (int k = 0; k < n; ++k) {
        const double x = 2.0 * std::numbers::pi * k / n;
        const double model = rep.coeffs.A * std::cos(x) + rep.coeffs.B * std::sin(x);
        ss += (phi[k] - model) * (phi[k] - model);
    }
    rep.fit_residual = std::sqrt(ss / n);
    const double allowed = std::max(1e-8 * rep.coeffs.Cmag, 10.0 * rep.quadrature_error);
    if (rep.fit_residual > allowed && rep.fit_residual > 0)
        throw ModelViolationError("extract_AB: phase is not sinusoidal in the emission time (residual " +
                                      std::to_string(rep.fit_residual) + ", |C| = " +
                                      std::to_string(rep.coeffs.Cmag) + ")",
                                  rep.fit_residual);
    return rep;
}

inline PhaseCoefficients extract_AB(const InterferenceLoop& loop, const Connection& conn,
                                    std::optional<double> omega = std::nullopt, const PhaseOptions& opt = {})
{
    return extract_AB_detailed(loop, conn, omega, opt).coeffs;
}

/// Decoherence factor F = J0(|C|).
inline double visibility(const PhaseCoefficients& c) { return bessel_j0(c.Cmag); }

/// Gaussian small-phase approximation 1 - |C|^2 / 2.
inline double small_phase_visibility(const PhaseCoefficients& c) { return 1.0 - 0.5 * c.Cmag * c.Cmag; }

struct MonteCarloEstimate {
    std::complex<double> mean{1.0, 0.0};
    double stderr_re = 0;
    double stderr_im = 0;
    std::uint64_t samples = 0;

    double modulus() const { return std::abs(mean); }
};

struct VisibilityResult {
    double F = 1;
    std::optional<MonteCarloEstimate> mc;
    double small_phase = 1;
};

namespace detail {

struct Moments {
    double n = 0, mean = 0, m2 = 0;

    void add(double x)
    {
        n += 1;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    void merge(const Moments& o)
    {
        if (o.n == 0) return;
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }
};

inline constexpr std::uint64_t mc_block = 1u << 14;

} // namespace detail

/**
 * <exp(i phi)> over t0 uniform on one period, with phi = A cos(w t0) + B sin(w t0).
 * Samples are grouped in fixed blocks whose partial moments are merged in block
 * order, so the result is bit-identical for any `threads`.
 */
inline MonteCarloEstimate monte_carlo_visibility(const PhaseCoefficients& c, std::uint64_t n,
                                                 std::uint64_t seed, unsigned threads = 0)
{
    if (n < 2) throw DomainError("monte_carlo_visibility: need at least 2 samples");
    const Philox4x32 rng(seed);
    const std::uint64_t blocks = (n + detail::mc_block - 1) / detail::mc_block;
    std::vector<std::array<detail::Moments, 2>> partial(blocks);
    auto work = [&](std::uint64_t first, std::uint64_t stride) {
        for (std::uint64_t b = first; b < blocks; b += stride) {
            const std::uint64_t lo = b * detail::mc_block;
            const std::uint64_t hi = std::min(n, lo + detail::mc_block);
            auto& [re, im] = partial[b];
            for (std::uint64_t i = lo; i < hi; ++i) {
                const double x = 2.0 * std::numbers::pi * rng.uniform2(i)[0];
                const double phi = c.A * std::cos(x) + c.B * std::sin(x);
                re.add(std::cos(phi));
                im.add(std::sin(phi));
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }
    detail::Moments re, im;
    for (const auto& p : partial) {
        re.merge(p[0]);
        im.merge(p[1]);
    }
    MonteCarloEstimate out;
    out.samples = n;
    out.mean = {re.mean, im.mean};
    const double nn = static_cast<double>(n);
    out.stderr_re = std::sqrt(std::max(0.0, re.m2 / (nn - 1)) / nn);
    out.stderr_im = std::sqrt(std::max(0.0, im.m2 / (nn - 1)) / nn);
    return out;
}

/// Monte-Carlo check starting from the loop: extracts (A, B) first.
inline MonteCarloEstimate monte_carlo_visibility(const InterferenceLoop& loop, const Connection& conn,
                                                 std::optional<double> omega, std::uint64_t n,
                                                 std::uint64_t seed, const PhaseOptions& opt = {})
{
    return monte_carlo_visibility(extract_AB(loop, conn, omega, opt), n, seed);
}

inline VisibilityResult evaluate_visibility(const PhaseCoefficients& c, std::uint64_t mc_samples = 0,
                                            std::uint64_t seed = 1)
{
    VisibilityResult v;
    v.F = visibility(c);
    v.small_phase = small_phase_visibility(c);
    if (mc_samples >= 2) v.mc = monte_carlo_visibility(c, mc_samples, seed);
    return v;
}

} // namespace acphase
