/**
 * @file  closed_forms.hpp
 * @brief Analytic A, B, |C| for every loop/field combination, plus order-of-magnitude estimates.
 *
 * Three families, never mixed:
 *   "*.exact"    forms derived for this library's conventions (phi = -oint a.dx, loops from
 *                trajectories.hpp); they reproduce the quadrature engine including sign.
 *   "*.printed"  the literature formulas as published, signs and typos included. Published
 *                formulas are magnitudes up to the global sign of phi.
 *   "*.estimate" the published order-of-magnitude variants (oscillating sines -> 1/sqrt 2).
 *
 * All inputs are in natural units. Where the published formula differs from the exact one,
 * the difference is described next to the function.
 */
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "acphase/errors.hpp"
#include "acphase/special_functions.hpp"
#include "acphase/units.hpp"
#include "acphase/vec.hpp"

namespace acphase {

enum class Scenario { diamond, ellipse, asymmetric, guide_te, guide_tm };
enum class Species { electron, dipole };

inline std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::diamond: return "diamond";
    case Scenario::ellipse: return "ellipse";
    case Scenario::asymmetric: return "asymmetric";
    case Scenario::guide_te: return "guide-TE";
    case Scenario::guide_tm: return "guide-TM";
    }
    return "?";
}

inline std::string to_string(Species s) { return s == Species::electron ? "electron" : "dipole"; }

/**
 * Every symbol used by the closed forms. Unset optionals are only an error when a formula
 * needs them; the error names the missing symbol.
 *
 * `amplitude` is E0 for the plane wave, |B0| for TE modes and |E0| for TM modes.
 * `d` and `l` are the diamond/asymmetric segment lengths; `l_index` is the mode index.
 */
struct ScenarioParams {
    Scenario scenario = Scenario::diamond;
    Species species = Species::dipole;

    std::optional<double> amplitude;
    std::optional<double> omega;
    std::optional<double> alpha, theta, T, tau, d, l;
    std::optional<double> s, s_prime;
    std::optional<double> a, b, k_y;
    std::optional<int> m_index, l_index;
    std::optional<double> L, v, lambda;
    double charge = constants::elementary_charge_LH;
    Vec3 dip_d{};
    Vec3 dip_m{};
};

struct ClosedForm {
    std::string id;
    double A = 0;
    double B = 0;
    double Cmag = 0;
};

struct Estimate {
    std::string id;
    double value = 0;
};

namespace detail {

inline double need(const std::optional<double>& v, const char* name, const ScenarioParams& p)
{
    if (!v)
        throw ConfigError("closed form for " + to_string(p.species) + " " + to_string(p.scenario) +
                          " needs parameter '" + name + "'");
    if (!(*v >= 0) || !std::isfinite(*v))
        throw DomainError(std::string("closed form: parameter '") + name + "' must be finite and >= 0");
    return *v;
}

inline int need(const std::optional<int>& v, const char* name, const ScenarioParams& p)
{
    if (!v)
        throw ConfigError("closed form for " + to_string(p.species) + " " + to_string(p.scenario) +
                          " needs parameter '" + name + "'");
    return *v;
}

inline ClosedForm make(std::string id, double A, double B) { return {std::move(id), A, B, std::hypot(A, B)}; }

inline double wavelength(const ScenarioParams& p)
{
    if (p.lambda) return need(p.lambda, "lambda", p);
    return 2.0 * std::numbers::pi / need(p.omega, "omega", p);
}

inline double speed(const ScenarioParams& p)
{
    const double v = need(p.v, "v", p);
    if (!(v > 0 && v < 1)) throw DomainError("closed form: v must lie in (0, 1)");
    return v;
}

/// d = e L when L is given, otherwise the named dipole component.
inline double dipole_scale(const ScenarioParams& p, double component)
{
    return p.L ? std::fabs(p.charge) * *p.L : component;
}

struct GuideData {
    double kx, kz, ky, gamma2, omega;
    int m, l;
};

inline GuideData guide(const ScenarioParams& p)
{
    const double a = need(p.a, "a", p);
    const double b = need(p.b, "b", p);
    const int m = need(p.m_index, "m", p);
    const int l = need(p.l_index, "l_index", p);
    if (m < 0 || l < 0 || (m == 0 && l == 0))
        throw ConfigError("closed form: invalid guide mode (m, l) = (" + std::to_string(m) + ", " +
                          std::to_string(l) + ")");
    if (p.scenario == Scenario::guide_tm && (m == 0 || l == 0))
        throw ConfigError("closed form: TM modes need m >= 1 and l >= 1");
    GuideData g;
    g.m = m;
    g.l = l;
    g.kx = m * std::numbers::pi / b;
    g.kz = l * std::numbers::pi / a;
    g.gamma2 = g.kx * g.kx + g.kz * g.kz;
    if (p.k_y) {
        g.ky = need(p.k_y, "k_y", p);
        g.omega = std::sqrt(g.gamma2 + g.ky * g.ky);
    } else {
        g.omega = need(p.omega, "omega", p);
        if (!(g.omega * g.omega > g.gamma2)) throw DomainError("closed form: guide mode below cutoff");
        g.ky = std::sqrt(g.omega * g.omega - g.gamma2);
    }
    return g;
}

/// The two trigonometric brackets of the guide integrals.
inline double guide_q1(double wT, int m)
{
    const double mp = m * std::numbers::pi;
    return wT * std::cos(mp / 2) * std::sin(wT / 2) - mp * std::cos(wT / 2) * std::sin(mp / 2);
}

inline double guide_q2(double wT, int m)
{
    const double mp = m * std::numbers::pi;
    return wT * std::cos(wT / 2) * std::sin(mp / 2) - mp * std::cos(mp / 2) * std::sin(wT / 2);
}

inline double guide_denominator(double wT, int m)
{
    const double mp = m * std::numbers::pi;
    const double den = wT * wT - mp * mp;
    if (den == 0) throw DomainError("closed form: resonant guide crossing, omega T = m pi");
    return den;
}

} // namespace detail

// ---------------------------------------------------------------- diamond

/**
 * Dipole: A = -4 E0 d_y (2 alpha/(w theta)) sin(w theta/2) sin(w (T + theta)/2), B = 0.
 * Electron: the temporal-gauge potential puts the signal in B:
 *   B = -(8 q E0 alpha/(w^2 theta)) sin(w theta/2) sin(w (T + theta)/2), A = 0.
 */
inline ClosedForm diamond_exact(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double th = detail::need(p.theta, "theta", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double ss = std::sin(w * th / 2) * std::sin(w * (T + th) / 2);
    if (p.species == Species::dipole)
        return detail::make("dipole.diamond.exact", -4.0 * E0 * p.dip_d.y * (2 * al / (w * th)) * ss, 0.0);
    return detail::make("electron.diamond.exact", 0.0, -8.0 * p.charge * E0 * al / (w * w * th) * ss);
}

/// |C_d| = 4 E0 d_y (2 alpha/(w theta)) sin sin, as published (dipoles only).
inline ClosedForm diamond_printed(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("diamond_printed: no exact electron formula is published");
    ClosedForm c = diamond_exact(p);
    return detail::make("dipole.diamond.printed", -c.A, 0.0);
}

/**
 * Dipole: (2/pi) e E0 (alpha/s) lambda L v.  Electron: (1/pi^2) e E0 lambda^2 (alpha/s) v.
 * s defaults to sqrt(alpha^2 + l^2).
 */
inline Estimate diamond_estimate(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double s = p.s ? detail::need(p.s, "s", p) : std::hypot(al, detail::need(p.l, "l", p));
    const double lam = detail::wavelength(p);
    const double v = detail::speed(p);
    if (p.species == Species::dipole) {
        const double dip = detail::dipole_scale(p, p.dip_d.y);
        return {"dipole.diamond.estimate", 2.0 / std::numbers::pi * E0 * dip * (al / s) * lam * v};
    }
    return {"electron.diamond.estimate",
            std::fabs(p.charge) * E0 * lam * lam * (al / s) * v / (std::numbers::pi * std::numbers::pi)};
}

/// |C_d| / |C_e| of the two estimates for matched parameters; equals L / lambda.
inline double diamond_estimate_ratio(ScenarioParams p)
{
    p.species = Species::dipole;
    const double cd = diamond_estimate(p).value;
    p.species = Species::electron;
    return cd / diamond_estimate(p).value;
}

// ---------------------------------------------------------------- ellipse

/**
 * Dipole: A = -2 pi alpha E0 d_y J1(w tau), B = 0 (agrees with the published magnitude).
 * Electron: B = -(q E0/w) 2 pi alpha J1(w tau), A = 0. The published electron form
 * 2 pi alpha e E0 lambda J1 is larger by lambda w = 2 pi.
 */
inline ClosedForm ellipse_exact(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double tau = detail::need(p.tau, "tau", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double j1 = bessel_j1(w * tau);
    if (p.species == Species::dipole)
        return detail::make("dipole.ellipse.exact", -2.0 * std::numbers::pi * al * E0 * p.dip_d.y * j1, 0.0);
    return detail::make("electron.ellipse.exact", 0.0, -p.charge * E0 / w * 2.0 * std::numbers::pi * al * j1);
}

inline ClosedForm ellipse_printed(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double tau = detail::need(p.tau, "tau", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double j1 = bessel_j1(w * tau);
    if (p.species == Species::dipole)
        return detail::make("dipole.ellipse.printed", 2.0 * std::numbers::pi * al * E0 * p.dip_d.y * j1, 0.0);
    return detail::make("electron.ellipse.printed",
                        2.0 * std::numbers::pi * al * p.charge * E0 * detail::wavelength(p) * j1, 0.0);
}

/**
 * Published large-w tau form sqrt(pi) alpha e E0 L (v lambda / s')^(1/2), equivalently
 * sqrt(2) pi alpha E0 d / (w tau)^(1/2) with w tau = 2 pi s' / (v lambda). Dipoles only.
 */
inline Estimate ellipse_estimate(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("ellipse_estimate: published for dipoles only");
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double dip = detail::dipole_scale(p, p.dip_d.y);
    if (p.s_prime && p.v) {
        const double sp = detail::need(p.s_prime, "s_prime", p);
        return {"dipole.ellipse.estimate",
                std::sqrt(std::numbers::pi) * al * E0 * dip * std::sqrt(detail::speed(p) * detail::wavelength(p) / sp)};
    }
    const double wt = detail::need(p.omega, "omega", p) * detail::need(p.tau, "tau", p);
    return {"dipole.ellipse.estimate", std::sqrt(2.0) * std::numbers::pi * al * E0 * dip / std::sqrt(wt)};
}

/**
 * Leading Hankel term of the exact form, 2 pi alpha E0 d_y sqrt(2/(pi w tau)) |cos(w tau - 3 pi/4)|.
 * Unlike the published estimate it keeps the oscillation, so it tracks the exact value.
 */
inline Estimate ellipse_hankel(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double wt = w * detail::need(p.tau, "tau", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double j1 = std::sqrt(2.0 / (std::numbers::pi * wt)) * std::cos(wt - 0.75 * std::numbers::pi);
    const double coupling = p.species == Species::dipole ? p.dip_d.y : p.charge / w;
    return {to_string(p.species) + ".ellipse.hankel", std::fabs(2.0 * std::numbers::pi * al * E0 * coupling * j1)};
}

// ---------------------------------------------------------------- asymmetric

/**
 * Ellipse arm (half-span h = d + l, height alpha) against the lower diamond arm; needs
 * tau = T/2 + theta.
 * Dipole:
 *   A = -d_y E0 [pi alpha J1(w tau) + (4 alpha/(w theta)) sin(w theta/2) sin(w (T+theta)/2)]
 *   B = m_y E0 [(2h/(w tau)) sin(w tau) - (4l/(w theta)) sin(w theta/2) cos(w (T+theta)/2)
 *              - (4d/(w T)) sin(w T/2)]
 * No d_z or m_x term survives: the time component -d.E - m.B of the connection depends on t
 * only, so it integrates to zero around any closed loop in the y = 0 plane.
 * Electron: B = -(q E0/w) [pi alpha J1(w tau) + (4 alpha/(w theta)) sin sin], A = 0.
 */
inline ClosedForm asymmetric_exact(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double th = detail::need(p.theta, "theta", p);
    const double T = detail::need(p.T, "T", p);
    const double tau = detail::need(p.tau, "tau", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double pi = std::numbers::pi;
    const double ss = std::sin(w * th / 2) * std::sin(w * (T + th) / 2);
    const double bracket = pi * al * bessel_j1(w * tau) + 4.0 * al / (w * th) * ss;
    if (p.species == Species::electron)
        return detail::make("electron.asymmetric.exact", 0.0, -p.charge * E0 / w * bracket);
    const double d = detail::need(p.d, "d", p);
    const double l = detail::need(p.l, "l", p);
    const double h = d + l;
    const double B = p.dip_m.y * E0 *
                     (2.0 * h / (w * tau) * std::sin(w * tau) -
                      4.0 * l / (w * th) * std::sin(w * th / 2) * std::cos(w * (T + th) / 2) -
                      4.0 * d / (w * T) * std::sin(w * T / 2));
    return detail::make("dipole.asymmetric.exact", -p.dip_d.y * E0 * bracket, B);
}

/// Published A and B. Dipole B carries the (d_z + m_x) term absent from the exact form.
inline ClosedForm asymmetric_printed(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double w = detail::need(p.omega, "omega", p);
    const double th = detail::need(p.theta, "theta", p);
    const double T = detail::need(p.T, "T", p);
    const double tau = detail::need(p.tau, "tau", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double pi = std::numbers::pi;
    const double s_th = std::sin(w * th / 2);
    const double ss = s_th * std::sin(w * (T + th) / 2);
    const double j1 = bessel_j1(w * tau);
    if (p.species == Species::electron) {
        const double A = 2.0 * pi * p.charge * E0 * al / w * j1 + 4.0 * p.charge * E0 * al / (w * w * th) * ss;
        return detail::make("electron.asymmetric.printed", A, 0.0);
    }
    const double d = detail::need(p.d, "d", p);
    const double l = detail::need(p.l, "l", p);
    const double A = pi * p.dip_d.y * E0 * al * j1 + 4.0 * E0 * p.dip_d.y * al / (w * th) * ss;
    const double c_th = std::cos(w * (T + th) / 2);
    const double B = (p.dip_d.z + p.dip_m.x) * 2.0 * E0 / w * (s_th * c_th + std::sin(w * T / 2)) +
                     2.0 * p.dip_m.y * E0 * l / (w * th) * s_th * c_th +
                     4.0 * d * E0 * p.dip_m.y / (w * T) * std::sin(w * T / 2);
    return detail::make("dipole.asymmetric.printed", A, B);
}

/**
 * Dipole: (e/pi) E0 L lambda (velocity independent).
 * Electron: (e/sqrt(2 pi)) E0 alpha (v lambda^3 / s')^(1/2).
 */
inline Estimate asymmetric_estimate(const ScenarioParams& p)
{
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double lam = detail::wavelength(p);
    if (p.species == Species::dipole) {
        const double dip = detail::dipole_scale(p, p.dip_d.z + p.dip_m.x);
        return {"dipole.asymmetric.estimate", dip * E0 * lam / std::numbers::pi};
    }
    const double al = detail::need(p.alpha, "alpha", p);
    const double sp = detail::need(p.s_prime, "s_prime", p);
    return {"electron.asymmetric.estimate", std::fabs(p.charge) / std::sqrt(2.0 * std::numbers::pi) * E0 * al *
                                                std::sqrt(detail::speed(p) * lam * lam * lam / sp)};
}

// ---------------------------------------------------------------- guide

/**
 * TE crossing (paths at z = +-alpha, x from +b/2 to -b/2, duration T), dipole:
 *   A = 0,
 *   B = -4 |B0| (k_z/gamma^2) sin(l pi alpha/a) Q1 (d_x w T - m_z k_y T - b d_y k_y) / ((w T)^2 - (m pi)^2)
 * with Q1 = w T cos(m pi/2) sin(w T/2) - m pi cos(w T/2) sin(m pi/2).
 * Electron (TE with m = 0): A = (4 q v / w)(a/pi) |B0| sin(pi alpha/a) sin(w T/2), v = b/T.
 */
inline ClosedForm guide_te_exact(const ScenarioParams& p)
{
    const auto g = detail::guide(p);
    const double B0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double a = *p.a, b = *p.b;
    const double wT = g.omega * T;
    if (p.species == Species::electron) {
        if (g.m != 0) throw ConfigError("electron guide closed form is available for TE_(m=0) modes only");
        const double v = b / T;
        const double A = 4.0 * p.charge * v / g.omega * (a / (g.l * std::numbers::pi)) * B0 *
                         std::sin(g.l * std::numbers::pi * al / a) * std::sin(wT / 2);
        return detail::make("electron.guide_te.exact", A, 0.0);
    }
    const double B = -4.0 / detail::guide_denominator(wT, g.m) * B0 * (g.kz / g.gamma2) *
                     std::sin(g.l * std::numbers::pi * al / a) * detail::guide_q1(wT, g.m) *
                     (p.dip_d.x * wT - p.dip_m.z * g.ky * T - b * p.dip_d.y * g.ky);
    return detail::make("dipole.guide_te.exact", 0.0, B);
}

/**
 * Published general TE formula. Its last bracket reads (d_x w T - m_z k_z T - 2d d_y k_y) with
 * 2d = b; the m_z term carries k_z where the derivation (and the published TE10 form) has k_y.
 */
inline ClosedForm guide_te_printed(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("guide_te_printed: dipoles only");
    const auto g = detail::guide(p);
    const double B0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double wT = g.omega * T;
    const double B = -4.0 / detail::guide_denominator(wT, g.m) * B0 * (g.kz / g.gamma2) *
                     std::sin(g.l * std::numbers::pi * al / *p.a) * detail::guide_q1(wT, g.m) *
                     (p.dip_d.x * wT - p.dip_m.z * g.kz * T - *p.b * p.dip_d.y * g.ky);
    return detail::make("dipole.guide_te.printed", 0.0, B);
}

/// Published TE10 form (m = 0, l = 1): -(4/(w T)) |B0| (a/pi) sin(pi alpha/a) sin(w T/2)(d_x w T - m_z k_y T - b d_y k_y).
inline ClosedForm guide_te10_printed(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("guide_te10_printed: dipoles only");
    const auto g = detail::guide(p);
    if (g.m != 0 || g.l != 1) throw ConfigError("guide_te10_printed: mode must be (m, l) = (0, 1)");
    const double B0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double a = *p.a, b = *p.b;
    const double wT = g.omega * T;
    const double B = -4.0 / wT * B0 * (a / std::numbers::pi) * std::sin(std::numbers::pi * al / a) *
                     std::sin(wT / 2) * (p.dip_d.x * wT - p.dip_m.z * g.ky * T - b * p.dip_d.y * g.ky);
    return detail::make("dipole.guide_te10.printed", 0.0, B);
}

/**
 * TE10 estimates. Dipole: (2 sqrt 2/pi) B0 a sin(pi alpha/a) d_x.
 * Electron: (2 pi^3)^(-1/2) e B0 a lambda v sin(pi alpha/a).
 */
inline Estimate guide_te10_estimate(const ScenarioParams& p)
{
    const double B0 = detail::need(p.amplitude, "amplitude", p);
    const double a = detail::need(p.a, "a", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double sn = std::sin(std::numbers::pi * al / a);
    const double pi = std::numbers::pi;
    if (p.species == Species::dipole) {
        const double dx = detail::dipole_scale(p, p.dip_d.x);
        return {"dipole.guide_te10.estimate", 2.0 * std::sqrt(2.0) / pi * B0 * a * sn * dx};
    }
    const double lam = detail::wavelength(p);
    return {"electron.guide_te10.estimate",
            std::fabs(p.charge) * B0 * a * lam * detail::speed(p) * sn / std::sqrt(2.0 * pi * pi * pi)};
}

/// Published magnitude for a general TE mode: B0 a |sin(pi alpha/a)| [d_x^2 + (b d_y k_z/(w T))^2 - (2b/(w T)) d_x d_y k_y]^(1/2).
inline Estimate guide_te_magnitude_estimate(const ScenarioParams& p)
{
    const auto g = detail::guide(p);
    const double B0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double a = *p.a, b = *p.b;
    const double wT = g.omega * T;
    const double dx = p.dip_d.x, dy = p.dip_d.y;
    const double r = b / wT;
    const double inner = dx * dx + (r * dy * g.kz) * (r * dy * g.kz) - 2.0 * r * dx * dy * g.ky;
    return {"dipole.guide_te.magnitude_estimate",
            B0 * a * std::fabs(std::sin(std::numbers::pi * al / a)) * std::sqrt(std::max(0.0, inner))};
}

/**
 * TM crossing, dipole (same loop as TE):
 *   B = 4 |E0| sin(l pi alpha/a) / ((w T)^2 - (m pi)^2)
 *       x [k_x Q1 (w b d_y + w m_z T - k_y d_x T)/gamma^2 + Q2 (b m_z + d_y T)],  A = 0,
 * Q2 = w T cos(w T/2) sin(m pi/2) - m pi cos(m pi/2) sin(w T/2).
 * The published form has the opposite relative sign between the k_x Q1 and Q2 terms.
 */
inline ClosedForm guide_tm_exact(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("guide_tm_exact: TM modes give no AB phase for charges");
    const auto g = detail::guide(p);
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double b = *p.b;
    const double wT = g.omega * T;
    const double w = g.omega;
    const auto& D = p.dip_d;
    const auto& M = p.dip_m;
    const double bracket =
        g.kx * detail::guide_q1(wT, g.m) * (w * b * D.y + w * M.z * T - g.ky * D.x * T) / g.gamma2 +
        detail::guide_q2(wT, g.m) * (b * M.z + D.y * T);
    const double B = 4.0 * E0 * std::sin(g.l * std::numbers::pi * al / *p.a) / detail::guide_denominator(wT, g.m) * bracket;
    return detail::make("dipole.guide_tm.exact", 0.0, B);
}

inline ClosedForm guide_tm_printed(const ScenarioParams& p)
{
    if (p.species != Species::dipole) throw ConfigError("guide_tm_printed: dipoles only");
    const auto g = detail::guide(p);
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double b = *p.b;
    const double wT = g.omega * T;
    const double w = g.omega;
    const auto& D = p.dip_d;
    const auto& M = p.dip_m;
    const double bracket =
        g.kx * detail::guide_q1(wT, g.m) * (-D.x * g.ky * T + M.z * w * T + b * D.y * w) / g.gamma2 +
        detail::guide_q2(wT, g.m) * (-D.y * T - b * M.z);
    const double B = -4.0 * E0 * std::sin(g.l * std::numbers::pi * al / *p.a) / detail::guide_denominator(wT, g.m) * bracket;
    return detail::make("dipole.guide_tm.printed", 0.0, B);
}

/**
 * Terms of the exact TM form that survive w T -> infinity at fixed sin(w T/2), cos(w T/2):
 *   m_z part:    4 E0 s k_x cos(m pi/2) sin(w T/2) m_z / gamma^2
 *   dipole part: 4 E0 s [-k_x k_y cos(m pi/2) sin(w T/2) d_x / (w gamma^2) + sin(m pi/2) cos(w T/2) d_y / w]
 * with s = sin(l pi alpha/a). The dipole part vanishes for d_x = 0 with even m, or d_y = 0 with odd m.
 */
struct TmVelocityIndependent {
    double m_z_part = 0;
    double dipole_part = 0;
    double total() const { return m_z_part + dipole_part; }
};

inline TmVelocityIndependent guide_tm_velocity_independent(const ScenarioParams& p)
{
    const auto g = detail::guide(p);
    const double E0 = detail::need(p.amplitude, "amplitude", p);
    const double T = detail::need(p.T, "T", p);
    const double al = detail::need(p.alpha, "alpha", p);
    const double wT = g.omega * T;
    const double s = std::sin(g.l * std::numbers::pi * al / *p.a);
    const double cm = std::cos(g.m * std::numbers::pi / 2);
    const double sm = std::sin(g.m * std::numbers::pi / 2);
    TmVelocityIndependent out;
    out.m_z_part = 4.0 * E0 * s * g.kx * cm * std::sin(wT / 2) * p.dip_m.z / g.gamma2;
    out.dipole_part = 4.0 * E0 * s *
                      (-g.kx * g.ky * cm * std::sin(wT / 2) * p.dip_d.x / (g.omega * g.gamma2) +
                       sm * std::cos(wT / 2) * p.dip_d.y / g.omega);
    return out;
}

// ---------------------------------------------------------------- registry

using ClosedFormFn = std::function<ClosedForm(const ScenarioParams&)>;
using EstimateFn = std::function<Estimate(const ScenarioParams&)>;

/// Exact form for the scenario in `p`.
inline ClosedForm exact_form(const ScenarioParams& p)
{
    switch (p.scenario) {
    case Scenario::diamond: return diamond_exact(p);
    case Scenario::ellipse: return ellipse_exact(p);
    case Scenario::asymmetric: return asymmetric_exact(p);
    case Scenario::guide_te: return guide_te_exact(p);
    case Scenario::guide_tm: return guide_tm_exact(p);
    }
    throw ConfigError("unknown scenario");
}

/// Published order-of-magnitude estimate for the scenario in `p`.
inline Estimate estimate_form(const ScenarioParams& p)
{
    switch (p.scenario) {
    case Scenario::diamond: return diamond_estimate(p);
    case Scenario::ellipse:
        if (p.species == Species::electron) {
            const ClosedForm c = ellipse_printed(p);
            return {"electron.ellipse.printed", c.Cmag};
        }
        return ellipse_estimate(p);
    case Scenario::asymmetric: return asymmetric_estimate(p);
    case Scenario::guide_te: return guide_te10_estimate(p);
    case Scenario::guide_tm: {
        const ClosedForm c = guide_tm_printed(p);
        return {"dipole.guide_tm.printed", c.Cmag};
    }
    }
    throw ConfigError("unknown scenario");
}

/// Every closed form addressable by id.
inline const std::map<std::string, ClosedFormFn>& closed_form_registry()
{
    static const std::map<std::string, ClosedFormFn> reg = {
        {"dipole.diamond.exact", diamond_exact},
        {"electron.diamond.exact", diamond_exact},
        {"dipole.diamond.printed", diamond_printed},
        {"dipole.ellipse.exact", ellipse_exact},
        {"electron.ellipse.exact", ellipse_exact},
        {"dipole.ellipse.printed", ellipse_printed},
        {"electron.ellipse.printed", ellipse_printed},
        {"dipole.asymmetric.exact", asymmetric_exact},
        {"electron.asymmetric.exact", asymmetric_exact},
        {"dipole.asymmetric.printed", asymmetric_printed},
        {"electron.asymmetric.printed", asymmetric_printed},
        {"dipole.guide_te.exact", guide_te_exact},
        {"electron.guide_te.exact", guide_te_exact},
        {"dipole.guide_te.printed", guide_te_printed},
        {"dipole.guide_te10.printed", guide_te10_printed},
        {"dipole.guide_tm.exact", guide_tm_exact},
        {"dipole.guide_tm.printed", guide_tm_printed},
    };
    return reg;
}

inline const std::map<std::string, EstimateFn>& estimate_registry()
{
    static const std::map<std::string, EstimateFn> reg = {
        {"dipole.diamond.estimate", diamond_estimate},
        {"electron.diamond.estimate", diamond_estimate},
        {"dipole.ellipse.estimate", ellipse_estimate},
        {"dipole.ellipse.hankel", ellipse_hankel},
        {"electron.ellipse.hankel", ellipse_hankel},
        {"dipole.asymmetric.estimate", asymmetric_estimate},
        {"electron.asymmetric.estimate", asymmetric_estimate},
        {"dipole.guide_te10.estimate", guide_te10_estimate},
        {"electron.guide_te10.estimate", guide_te10_estimate},
        {"dipole.guide_te.magnitude_estimate", guide_te_magnitude_estimate},
    };
    return reg;
}

/// Looks up `id`; the species prefix of the id overrides p.species.
inline ClosedForm evaluate_closed_form(const std::string& id, ScenarioParams p)
{
    const auto& reg = closed_form_registry();
    const auto it = reg.find(id);
    if (it == reg.end()) throw ConfigError("unknown closed form id '" + id + "'");
    p.species = id.rfind("electron.", 0) == 0 ? Species::electron : Species::dipole;
    return it->second(p);
}

inline Estimate evaluate_estimate(const std::string& id, ScenarioParams p)
{
    const auto& reg = estimate_registry();
    const auto it = reg.find(id);
    if (it == reg.end()) throw ConfigError("unknown estimate id '" + id + "'");
    p.species = id.rfind("electron.", 0) == 0 ? Species::electron : Species::dipole;
    return it->second(p);
}

} // namespace acphase
