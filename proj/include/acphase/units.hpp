/**
 * @file  units.hpp
 * @brief SI <-> Lorentz-Heaviside natural units (hbar = c = 1, energies in eV).
 *
 * Every conversion factor lives in `constants` below; nothing else in the
 * library hard-codes a unit conversion. Values are CODATA-2018.
 *
 * SI inputs are carried by PhysicalQuantity in SI base units:
 *   length [m], time [s], frequency [rad/s], energy [J], mass [kg],
 *   energy flux [W/m^2], electric field [V/m], magnetic field [T].
 * Natural results are powers of eV: length/time -> eV^-1, frequency/energy/
 * mass -> eV, energy flux -> eV^4, fields -> eV^2.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

#include "acphase/errors.hpp"

namespace acphase {

namespace constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double speed_of_light_m_s = 299'792'458.0;       // exact
inline constexpr double elementary_charge_C = 1.602'176'634e-19;  // exact
inline constexpr double joule_per_eV = elementary_charge_C;       // exact
inline constexpr double hbar_eV_s = 6.582'119'569e-16;            // exact to the digits given
inline constexpr double hbar_c_eV_m = hbar_eV_s * speed_of_light_m_s; // 197.3269804 eV nm
inline constexpr double fine_structure = 7.297'352'5693e-3;
inline constexpr double vacuum_permittivity_F_m = 8.854'187'8128e-12;
inline constexpr double vacuum_permeability_N_A2 = 1.256'637'062'12e-6;

inline constexpr double electron_mass_eV = 0.510'998'950'00e6;
inline constexpr double atomic_mass_unit_eV = 931.494'102'42e6;
inline constexpr double sodium_mass_u = 22.989'769'28;
inline constexpr double sodium_mass_eV = sodium_mass_u * atomic_mass_unit_eV; // ~21.41 GeV

/// Elementary charge in Lorentz-Heaviside units, e = sqrt(4 pi alpha) ~ 0.30282212.
inline const double elementary_charge_LH = std::sqrt(4.0 * pi * fine_structure);

} // namespace constants

enum class Dimension {
    length,
    time,
    frequency,
    energy,
    mass,
    energy_flux,
    electric_field,
    magnetic_field,
    dimensionless,
};

/// Parses the names used in config files and the constants dump.
inline Dimension parse_dimension(std::string_view name)
{
    if (name == "length") return Dimension::length;
    if (name == "time") return Dimension::time;
    if (name == "frequency") return Dimension::frequency;
    if (name == "energy") return Dimension::energy;
    if (name == "mass") return Dimension::mass;
    if (name == "energy-flux") return Dimension::energy_flux;
    if (name == "electric-field") return Dimension::electric_field;
    if (name == "magnetic-field") return Dimension::magnetic_field;
    if (name == "dimensionless") return Dimension::dimensionless;
    throw ConfigError("unknown dimension '" + std::string(name) + "'");
}

struct PhysicalQuantity {
    double value = 0.0; ///< in SI base units for `dim`
    Dimension dim = Dimension::dimensionless;
};

namespace detail {

/// Multiplier taking an SI value of the given dimension to natural units.
inline double si_to_natural_factor(Dimension dim)
{
    using namespace constants;
    const double hc = hbar_c_eV_m;
    switch (dim) {
    case Dimension::length: return 1.0 / hc;
    case Dimension::time: return 1.0 / hbar_eV_s;
    case Dimension::frequency: return hbar_eV_s;
    case Dimension::energy: return 1.0 / joule_per_eV;
    case Dimension::mass: return speed_of_light_m_s * speed_of_light_m_s / joule_per_eV;
    // W/m^2 = J s^-1 m^-2 -> eV * eV * eV^2
    case Dimension::energy_flux: return hbar_eV_s * hc * hc / joule_per_eV;
    // Energy density eps0 E^2/2 [J/m^3] must equal E_nat^2/2 [eV^4].
    case Dimension::electric_field:
        return std::sqrt(vacuum_permittivity_F_m * hc * hc * hc / joule_per_eV);
    case Dimension::magnetic_field:
        return std::sqrt(hc * hc * hc / (vacuum_permeability_N_A2 * joule_per_eV));
    case Dimension::dimensionless: return 1.0;
    }
    throw ConfigError("unknown dimension");
}

} // namespace detail

inline double to_natural(const PhysicalQuantity& q)
{
    if (!std::isfinite(q.value)) throw DomainError("to_natural: non-finite value");
    return q.value * detail::si_to_natural_factor(q.dim);
}

inline PhysicalQuantity from_natural(double natural, Dimension dim)
{
    return {natural / detail::si_to_natural_factor(dim), dim};
}

// Convenience constructors for the SI units the configs use.
inline PhysicalQuantity meters(double v) { return {v, Dimension::length}; }
inline PhysicalQuantity centimeters(double v) { return {v * 1e-2, Dimension::length}; }
inline PhysicalQuantity millimeters(double v) { return {v * 1e-3, Dimension::length}; }
inline PhysicalQuantity micrometers(double v) { return {v * 1e-6, Dimension::length}; }
inline PhysicalQuantity nanometers(double v) { return {v * 1e-9, Dimension::length}; }
inline PhysicalQuantity seconds(double v) { return {v, Dimension::time}; }
inline PhysicalQuantity watts_per_cm2(double v) { return {v * 1e4, Dimension::energy_flux}; }
inline PhysicalQuantity kilograms(double v) { return {v, Dimension::mass}; }

/// Angular frequency 2 pi / lambda of a vacuum wave, lambda in natural units.
inline double omega_from_wavelength(double lambda_natural)
{
    if (!(lambda_natural > 0)) throw DomainError("wavelength must be positive");
    return 2.0 * constants::pi / lambda_natural;
}

struct PlaneWaveFluxTarget {};

/// Guide energy density rho = (a B0)^2 / lambda^2, lengths in natural units.
struct GuideFluxTarget {
    double a = 0;
    double lambda = 0;
};

using FluxTarget = std::variant<PlaneWaveFluxTarget, GuideFluxTarget>;

/**
 * Field amplitude carrying the given energy flux (== energy density when c = 1).
 * Plane wave: E0 = sqrt(2 rho). Guide: B0 = (lambda / a) sqrt(rho).
 */
inline double field_amplitude_from_flux(const PhysicalQuantity& flux, const FluxTarget& target)
{
    if (flux.dim != Dimension::energy_flux)
        throw ConfigError("field_amplitude_from_flux: flux must have dimension energy-flux");
    if (flux.value < 0 || !std::isfinite(flux.value))
        throw DomainError("field_amplitude_from_flux: flux must be non-negative and finite");
    const double rho = to_natural(flux);
    if (const auto* guide = std::get_if<GuideFluxTarget>(&target)) {
        if (!(guide->a > 0) || !(guide->lambda > 0))
            throw DomainError("field_amplitude_from_flux: guide needs a > 0 and lambda > 0");
        return guide->lambda / guide->a * std::sqrt(rho);
    }
    return std::sqrt(2.0 * rho);
}

/// Inverse of field_amplitude_from_flux, returning the flux in W/cm^2.
inline double flux_W_cm2_from_amplitude(double amplitude, const FluxTarget& target)
{
    double rho = 0;
    if (const auto* guide = std::get_if<GuideFluxTarget>(&target)) {
        const double r = amplitude * guide->a / guide->lambda;
        rho = r * r;
    } else {
        rho = amplitude * amplitude / 2.0;
    }
    return from_natural(rho, Dimension::energy_flux).value * 1e-4;
}

} // namespace acphase
