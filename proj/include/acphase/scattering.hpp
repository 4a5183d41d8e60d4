/**
 * @file  scattering.hpp
 * @brief Classical force on a dipole, radiated-power cross sections, mean-free-path bound.
 *
 * The cross-section formulas are Gaussian-unit expressions: e^2 there is the fine-structure
 * constant, so the Thomson value is (8 pi/3)(alpha/m_e)^2. Dipole moments are passed in the
 * library's Lorentz-Heaviside units and converted (d_G = d_LH / sqrt(4 pi)); d.E is the same
 * number in both systems, so the moments keep their meaning.
 */
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "acphase/closed_forms.hpp"
#include "acphase/errors.hpp"
#include "acphase/fields.hpp"
#include "acphase/units.hpp"
#include "acphase/vec.hpp"

namespace acphase {

namespace detail {

inline double gaussian_charge_squared() { return constants::fine_structure; }

inline double lh_to_gaussian_moment(double v) { return v / std::sqrt(4.0 * std::numbers::pi); }

} // namespace detail

// ---------------------------------------------------------------- forces

/**
 * F = grad(d.E + m.B) + d/dt (d x B), evaluated with fourth-order central differences.
 * `h` is the step in both space and time; the default is 1e-3 of the field's reduced
 * wavelength (or of the distance to the origin for static fields).
 */
inline Vec3 dipole_force_general(const EMField& field, const Dipole& dip, const Vec4& p, double t0 = 0.0,
                                 std::optional<double> h_in = std::nullopt)
{
    double h;
    if (h_in) {
        h = *h_in;
    } else {
        const double w = frequency(field);
        h = w > 0 ? 1e-3 / w : 1e-3 * std::max(1.0, std::hypot(p.x, p.z));
    }
    auto energy = [&](const Vec4& q) {
        const FieldValue f = eval_EB(field, q, t0);
        return dot(dip.d, f.E) + dot(dip.m, f.B);
    };
    auto d5 = [&](auto&& fn, const Vec4& dir) {
        return (-fn(p + dir * (2 * h)) + 8.0 * fn(p + dir * h) - 8.0 * fn(p - dir * h) + fn(p - dir * (2 * h))) /
               (12.0 * h);
    };
    Vec3 grad{d5(energy, {0, 1, 0, 0}), d5(energy, {0, 0, 1, 0}), d5(energy, {0, 0, 0, 1})};
    auto dxb = [&](const Vec4& q) { return cross(dip.d, eval_EB(field, q, t0).B); };
    const Vec4 dt{1, 0, 0, 0};
    const Vec3 ddt = (dxb(p + dt * (2 * h)) * -1.0 + dxb(p + dt * h) * 8.0 - dxb(p - dt * h) * 8.0 +
                      dxb(p - dt * (2 * h))) /
                     (12.0 * h);
    return grad + ddt;
}

/// Published plane-wave special case F = -k E0 cos(w t - k y)(m_x y^ + d_y z^), with t -> t + t0.
inline Vec3 dipole_force_planewave_printed(const PlaneWave& pw, const Dipole& dip, const Vec4& p, double t0 = 0.0)
{
    const double c = -pw.k() * pw.E0 * std::cos(pw.omega * (p.t + t0) - pw.k() * p.y);
    return {0.0, c * dip.m.x, c * dip.d.y};
}

/**
 * Published TE-mode force (magnetic moments dropped, B0 real, phase k_y y - w (t - t0)),
 * transcribed term by term. Compare against dipole_force_general, which is authoritative.
 */
inline Vec3 dipole_force_te_printed(const WaveguideMode& g, const Dipole& dip, const Vec4& p, double t0 = 0.0)
{
    const double kx = g.k_x(), ky = g.k_y(), kz = g.k_z(), k = g.omega(), g2 = g.gamma() * g.gamma();
    const double B0 = g.amplitude();
    const double ph = ky * p.y - g.omega() * (p.t - t0);
    const double sx = std::sin(kx * p.x), cx = std::cos(kx * p.x);
    const double sz = std::sin(kz * p.z), cz = std::cos(kz * p.z);
    const double sp = std::sin(ph), cp = std::cos(ph);
    const double fx = k * kz / g2 * B0 *
                      (dip.d.x * kx * sx * sz * sp - dip.d.y * ky * cx * sz * cp - dip.d.z * kz * cz * cx * sp);
    const double fz = k * kx / g2 * B0 *
                      (dip.d.x * kx * cx * cz * sp + dip.d.y * ky * sx * cz * cp - dip.d.z * kz * sx * sz * sp);
    return {fx, 0.0, fz};
}

// ---------------------------------------------------------------- cross sections

/** Natural-unit inputs for the cross-section formulas. Moments in Lorentz-Heaviside units. */
struct ScatteringParams {
    double m_A = constants::sodium_mass_eV;
    double m_e = constants::electron_mass_eV;
    Vec3 d{};
    Vec3 m{};
    double k = 0;   ///< |k| = omega
    double k_y = 0;
    double L = 0;   ///< dipole length, used by the ratio forms
};

struct CrossSection {
    double natural = 0; ///< eV^-2
    double m2 = 0;

    static CrossSection from_natural(double s)
    {
        const double hc = constants::hbar_c_eV_m;
        return {s, s * hc * hc};
    }
};

/// Thomson cross section (8 pi/3)(e^2/m_e)^2 with e^2 = alpha.
inline CrossSection sigma_thomson(double m_e = constants::electron_mass_eV)
{
    if (!(m_e > 0)) throw DomainError("sigma_thomson: mass must be positive");
    const double r = detail::gaussian_charge_squared() / m_e;
    return CrossSection::from_natural(8.0 * std::numbers::pi / 3.0 * r * r);
}

/// sigma_d = (8 pi/3)(e^2/m_A^2) k_y^2 (d_y^2 + m_x^2).
inline CrossSection sigma_dipole_planewave(const ScatteringParams& p)
{
    if (!(p.m_A > 0)) throw DomainError("sigma_dipole_planewave: atom mass must be positive");
    const double dy = detail::lh_to_gaussian_moment(p.d.y);
    const double mx = detail::lh_to_gaussian_moment(p.m.x);
    return CrossSection::from_natural(8.0 * std::numbers::pi / 3.0 * detail::gaussian_charge_squared() /
                                      (p.m_A * p.m_A) * p.k_y * p.k_y * (dy * dy + mx * mx));
}

/**
 * Published ratio sigma_d / sigma_e = (L/lambda)^2 (m_e/m_A)^2. It equals the ratio of the two
 * formulas with d_y = e L only when lambda is the reduced wavelength 1/k_y.
 */
inline double sigma_ratio_planewave(double L, double lambda, double m_A, double m_e = constants::electron_mass_eV)
{
    if (!(m_A > 0) || !(m_e > 0)) throw DomainError("sigma_ratio_planewave: masses must be positive");
    const double r = (L / lambda) * (m_e / m_A);
    return r * r;
}

/// TE-mode cross sections: dipole (8 pi/3)(e^2 d_y^2/m_A^2) k k_y; electron (8 pi/3)(e^4/m_e^2)(k/k_y).
inline CrossSection sigma_te(const ScatteringParams& p, Species species)
{
    const double e2 = detail::gaussian_charge_squared();
    if (species == Species::electron) {
        if (!(p.k_y > 0)) throw DomainError("sigma_te: k_y = 0 is singular for the electron cross section");
        if (!(p.m_e > 0)) throw DomainError("sigma_te: electron mass must be positive");
        return CrossSection::from_natural(8.0 * std::numbers::pi / 3.0 * e2 * e2 / (p.m_e * p.m_e) * p.k / p.k_y);
    }
    if (!(p.m_A > 0)) throw DomainError("sigma_te: atom mass must be positive");
    const double dy = detail::lh_to_gaussian_moment(p.d.y);
    return CrossSection::from_natural(8.0 * std::numbers::pi / 3.0 * e2 * dy * dy / (p.m_A * p.m_A) * p.k * p.k_y);
}

/// Published relation sigma_TE^d / sigma_TE^e = k_y^2 L^2 (m_e/m_A)^2.
inline double sigma_te_ratio(double k_y, double L, double m_A, double m_e = constants::electron_mass_eV)
{
    const double r = k_y * L * m_e / m_A;
    return r * r;
}

/// TM modes: sigma_TM^d is taken equal to sigma_TE^d (the published approximation); `approximated` records it.
struct TmCrossSection {
    CrossSection sigma;
    bool approximated = true;
};

inline TmCrossSection sigma_tm(const ScatteringParams& p) { return {sigma_te(p, Species::dipole), true}; }

// ---------------------------------------------------------------- mean free path

struct FieldBoundReport {
    bool pass = true;
    bool unbounded = false;                 ///< sigma n = 0, l_mfp infinite
    double l_mfp = std::numeric_limits<double>::infinity(); ///< natural units (eV^-1)
    double l_mfp_m = std::numeric_limits<double>::infinity();
    double margin = 100;
    double max_flux_W_cm2 = std::numeric_limits<double>::infinity(); ///< set when a flux was supplied
};

/// Photon number density rho / omega for energy density rho (eV^4) at frequency omega (eV).
inline double photon_density(double energy_density, double omega)
{
    if (!(omega > 0)) throw DomainError("photon_density: omega must be positive");
    return energy_density / omega;
}

/**
 * l_mfp = 1/(sigma n); passes when l_mfp > margin * path_scale. If the current flux is given,
 * also reports the flux at which the bound would be saturated (l_mfp scales as 1/flux).
 */
inline FieldBoundReport max_field_bound(double sigma, double number_density, double path_scale, double margin = 100.0,
                                        std::optional<double> flux_W_cm2 = std::nullopt)
{
    if (sigma < 0 || number_density < 0) throw DomainError("max_field_bound: sigma and density must be >= 0");
    if (!(path_scale > 0)) throw DomainError("max_field_bound: path scale must be positive");
    if (margin < 1) throw DomainError("max_field_bound: margin must be >= 1");
    FieldBoundReport r;
    r.margin = margin;
    const double rate = sigma * number_density;
    if (rate == 0) {
        r.unbounded = true;
        return r;
    }
    r.l_mfp = 1.0 / rate;
    r.l_mfp_m = r.l_mfp * constants::hbar_c_eV_m;
    r.pass = r.l_mfp > margin * path_scale;
    if (flux_W_cm2) r.max_flux_W_cm2 = *flux_W_cm2 * r.l_mfp / (margin * path_scale);
    return r;
}

} // namespace acphase
