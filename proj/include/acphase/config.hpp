/**
 * @file  config.hpp
 * @brief JSON scenario configs: strict schema, SI keys with unit suffixes, scenario assembly.
 *
 * Layout (schema_version 1):
 *   field:      {type: plane_wave | guide | static_uniform | line_charge, ...}
 *   particle:   {species: dipole | electron, ...}
 *   trajectory: {kind: diamond | ellipse | asymmetric | guide, ..., v_over_c}
 *   run:        {mc_samples, seed, rel_tol, abs_tol_factor, oracle_tolerance, margin}   (optional)
 *   sweep:      {parameter: "block.key", values: [...]} or {parameter, from, to, points, scale}
 * Every key not understood for the chosen types is rejected with its path.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "acphase/closed_forms.hpp"
#include "acphase/errors.hpp"
#include "acphase/fields.hpp"
#include "acphase/trajectories.hpp"
#include "acphase/units.hpp"

namespace acphase {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

namespace detail {

struct LengthUnit {
    const char* suffix;
    double to_m;
};

inline constexpr LengthUnit length_units[] = {
    {"_m", 1.0}, {"_cm", 1e-2}, {"_mm", 1e-3}, {"_um", 1e-6}, {"_nm", 1e-9}};

/// Reads one JSON object, remembering which keys were consumed; finish() rejects the rest.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError("'" + path_ + "' must be a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& raw(const std::string& key)
    {
        if (!j_.contains(key)) throw ConfigError("missing required key '" + key_path(key) + "'");
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError("'" + key_path(key) + "' must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError("'" + key_path(key) + "' must be finite");
        return x;
    }

    std::optional<double> opt_number(const std::string& key)
    {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    std::int64_t integer(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError("'" + key_path(key) + "' must be an integer");
        return v.get<std::int64_t>();
    }

    std::string string(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError("'" + key_path(key) + "' must be a string");
        return v.get<std::string>();
    }

    Vec3 vec3(const std::string& key)
    {
        const json& v = raw(key);
        if (!v.is_array() || v.size() != 3)
            throw ConfigError("'" + key_path(key) + "' must be an array of 3 numbers");
        for (const auto& e : v)
            if (!e.is_number()) throw ConfigError("'" + key_path(key) + "' must be an array of 3 numbers");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    /// Length given as base + one unit suffix, returned in natural units.
    std::optional<double> opt_length(const std::string& base)
    {
        std::optional<double> out;
        std::string found;
        for (const auto& u : length_units) {
            const std::string key = base + u.suffix;
            if (!has(key)) continue;
            if (out) throw ConfigError("'" + key_path(base) + "' given twice ('" + found + "' and '" + key + "')");
            found = key;
            out = to_natural(meters(number(key) * u.to_m));
        }
        return out;
    }

    double length(const std::string& base)
    {
        auto v = opt_length(base);
        if (!v) throw ConfigError("missing required key '" + key_path(base) + "_<unit>' (m, cm, mm, um or nm)");
        return *v;
    }

    void finish() const
    {
        for (const auto& [key, value] : j_.items())
            if (!used_.count(key)) throw ConfigError("unknown key '" + key_path(key) + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline double non_negative(double v, const std::string& what)
{
    if (v < 0) throw ConfigError("'" + what + "' must be >= 0");
    return v;
}

inline double positive(double v, const std::string& what)
{
    if (!(v > 0)) throw ConfigError("'" + what + "' must be > 0");
    return v;
}

} // namespace detail

struct FieldConfig {
    std::string type;
    double flux_W_cm2 = 0;
    std::optional<double> amplitude; ///< natural units; overrides the flux when set
    double lambda = 0;
    ModeKind mode = ModeKind::TE;
    int m = 0, l = 0;
    double a = 0, b = 0;
    Vec3 E{}, B{};
    double linear_charge = 0;
};

struct ParticleConfig {
    Species species = Species::dipole;
    double charge = -constants::elementary_charge_LH;
    std::optional<double> L;
    Vec3 d{}, m{};
    double mass = constants::sodium_mass_eV;
    std::string mass_label = "sodium";
};

struct TrajectoryConfig {
    std::string kind;
    double alpha = 0;
    double d = 0, l = 0, halfspan = 0;
    std::optional<double> lower_alpha;
    double v = 0;
};

struct RunConfig {
    std::uint64_t mc_samples = 0;
    std::uint64_t seed = 1;
    double rel_tol = 1e-10;
    double abs_tol_factor = 1e-12;
    double oracle_tolerance = 1e-6;
    double margin = 100;
};

struct SweepConfig {
    std::string parameter;
    std::vector<double> values;
};

struct ScenarioConfig {
    FieldConfig field;
    ParticleConfig particle;
    TrajectoryConfig trajectory;
    RunConfig run;
    std::optional<SweepConfig> sweep;
};

namespace detail {

inline FieldConfig parse_field(const json& j)
{
    ObjectReader r(j, "field");
    FieldConfig f;
    f.type = r.string("type");
    if (f.type == "plane_wave") {
        f.lambda = positive(r.length("lambda"), "field.lambda");
        if (auto e = r.opt_number("E0_V_m"))
            f.amplitude = to_natural({*e, Dimension::electric_field});
        else
            f.flux_W_cm2 = non_negative(r.number("flux_W_cm2"), "field.flux_W_cm2");
    } else if (f.type == "guide") {
        const std::string mode = r.string("mode");
        if (mode == "TE")
            f.mode = ModeKind::TE;
        else if (mode == "TM")
            f.mode = ModeKind::TM;
        else
            throw ConfigError("'field.mode' must be \"TE\" or \"TM\", got \"" + mode + "\"");
        f.m = static_cast<int>(r.integer("m"));
        f.l = static_cast<int>(r.integer("l"));
        if (f.m == 0 && f.l == 0) throw ConfigError("invalid guide mode m = l = 0 (field.m, field.l)");
        if (f.m < 0 || f.l < 0) throw ConfigError("guide mode indices field.m, field.l must be >= 0");
        if (f.mode == ModeKind::TM && (f.m == 0 || f.l == 0))
            throw ConfigError("invalid TM mode (m, l) = (" + std::to_string(f.m) + ", " + std::to_string(f.l) +
                              "): TM modes need m >= 1 and l >= 1");
        f.a = positive(r.length("a"), "field.a");
        f.b = positive(r.length("b"), "field.b");
        f.lambda = positive(r.length("lambda"), "field.lambda");
        if (f.mode == ModeKind::TE && r.has("B0_T"))
            f.amplitude = to_natural({r.number("B0_T"), Dimension::magnetic_field});
        else if (f.mode == ModeKind::TM && r.has("E0_V_m"))
            f.amplitude = to_natural({r.number("E0_V_m"), Dimension::electric_field});
        else
            f.flux_W_cm2 = non_negative(r.number("flux_W_cm2"), "field.flux_W_cm2");
    } else if (f.type == "static_uniform") {
        const Vec3 E = r.has("E_V_m") ? r.vec3("E_V_m") : Vec3{};
        const Vec3 B = r.has("B_T") ? r.vec3("B_T") : Vec3{};
        f.E = E * to_natural({1.0, Dimension::electric_field});
        f.B = B * to_natural({1.0, Dimension::magnetic_field});
    } else if (f.type == "line_charge") {
        // charge per metre in units of e
        f.linear_charge = r.number("linear_charge_e_per_m") * constants::elementary_charge_LH *
                          constants::hbar_c_eV_m;
    } else {
        throw ConfigError("'field.type' must be plane_wave, guide, static_uniform or line_charge; got \"" +
                          f.type + "\"");
    }
    r.finish();
    return f;
}

inline ParticleConfig parse_particle(const json& j)
{
    ObjectReader r(j, "particle");
    ParticleConfig p;
    const std::string species = r.string("species");
    const double e = constants::elementary_charge_LH;
    const double nm = to_natural(nanometers(1.0));
    if (species == "electron") {
        p.species = Species::electron;
        if (auto q = r.opt_number("charge_e")) p.charge = *q * e;
        p.mass = constants::electron_mass_eV;
        p.mass_label = "electron";
    } else if (species == "dipole") {
        p.species = Species::dipole;
        if (auto L = r.opt_length("L")) p.L = detail::non_negative(*L, "particle.L");
        if (r.has("d_e_nm")) p.d = r.vec3("d_e_nm") * (e * nm);
        if (r.has("m_e_nm")) p.m = r.vec3("m_e_nm") * (e * nm);
        if (r.has("dipole_axis")) {
            if (!p.L) throw ConfigError("'particle.dipole_axis' needs 'particle.L_<unit>'");
            if (r.has("d_e_nm")) throw ConfigError("give either particle.d_e_nm or particle.dipole_axis, not both");
            const std::string axis = r.string("dipole_axis");
            const double dm = e * *p.L;
            if (axis == "x") p.d = {dm, 0, 0};
            else if (axis == "y") p.d = {0, dm, 0};
            else if (axis == "z") p.d = {0, 0, dm};
            else throw ConfigError("'particle.dipole_axis' must be x, y or z");
        }
        if (r.has("mass")) {
            p.mass_label = r.string("mass");
            if (p.mass_label != "sodium") throw ConfigError("'particle.mass' label must be \"sodium\" (or give mass_u)");
        }
        if (auto u = r.opt_number("mass_u")) {
            p.mass = positive(*u, "particle.mass_u") * constants::atomic_mass_unit_eV;
            p.mass_label = "custom";
        }
    } else {
        throw ConfigError("'particle.species' must be \"dipole\" or \"electron\", got \"" + species + "\"");
    }
    r.finish();
    return p;
}

inline TrajectoryConfig parse_trajectory(const json& j)
{
    ObjectReader r(j, "trajectory");
    TrajectoryConfig t;
    t.kind = r.string("kind");
    t.v = r.number("v_over_c");
    if (!(t.v > 0 && t.v < 1)) throw ConfigError("'trajectory.v_over_c' must lie in (0, 1)");
    t.alpha = non_negative(r.length("alpha"), "trajectory.alpha");
    if (t.kind == "diamond" || t.kind == "asymmetric") {
        t.d = positive(r.length("d"), "trajectory.d");
        t.l = positive(r.length("l"), "trajectory.l");
        if (t.kind == "asymmetric") t.lower_alpha = r.opt_length("lower_alpha");
    } else if (t.kind == "ellipse") {
        t.halfspan = positive(r.length("halfspan"), "trajectory.halfspan");
    } else if (t.kind != "guide") {
        throw ConfigError("'trajectory.kind' must be diamond, ellipse, asymmetric or guide; got \"" + t.kind + "\"");
    }
    r.finish();
    return t;
}

inline RunConfig parse_run(const json& j)
{
    ObjectReader r(j, "run");
    RunConfig c;
    if (r.has("mc_samples")) {
        const auto n = r.integer("mc_samples");
        if (n < 0) throw ConfigError("'run.mc_samples' must be >= 0");
        c.mc_samples = static_cast<std::uint64_t>(n);
    }
    if (r.has("seed")) {
        const json& s = r.raw("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            throw ConfigError("'run.seed' must be a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (auto v = r.opt_number("rel_tol")) c.rel_tol = positive(*v, "run.rel_tol");
    if (auto v = r.opt_number("abs_tol_factor")) c.abs_tol_factor = positive(*v, "run.abs_tol_factor");
    if (auto v = r.opt_number("oracle_tolerance")) c.oracle_tolerance = positive(*v, "run.oracle_tolerance");
    if (auto v = r.opt_number("margin")) {
        if (*v < 1) throw ConfigError("'run.margin' must be >= 1");
        c.margin = *v;
    }
    r.finish();
    return c;
}

inline SweepConfig parse_sweep(const json& j, const json& whole)
{
    ObjectReader r(j, "sweep");
    SweepConfig s;
    s.parameter = r.string("parameter");
    const auto dot = s.parameter.find('.');
    if (dot == std::string::npos) throw ConfigError("'sweep.parameter' must look like \"block.key\"");
    const std::string block = s.parameter.substr(0, dot), key = s.parameter.substr(dot + 1);
    if (block == "sweep" || !whole.contains(block) || !whole.at(block).is_object() ||
        !whole.at(block).contains(key) || !whole.at(block).at(key).is_number())
        throw ConfigError("swept parameter '" + s.parameter + "' is not a numeric key of the config");
    if (r.has("values")) {
        const json& v = r.raw("values");
        if (!v.is_array() || v.empty()) throw ConfigError("'sweep.values' must be a non-empty array");
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError("'sweep.values' must contain numbers only");
            s.values.push_back(x.get<double>());
        }
    } else {
        const double from = r.number("from"), to = r.number("to");
        const auto n = r.integer("points");
        if (n < 1) throw ConfigError("'sweep.points' must be >= 1");
        const std::string scale = r.has("scale") ? r.string("scale") : "linear";
        if (scale != "linear" && scale != "log") throw ConfigError("'sweep.scale' must be linear or log");
        if (scale == "log" && !(from > 0 && to > 0)) throw ConfigError("log sweep needs positive bounds");
        for (std::int64_t i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : double(i) / double(n - 1);
            s.values.push_back(scale == "log" ? from * std::pow(to / from, f) : from + (to - from) * f);
        }
    }
    r.finish();
    return s;
}

} // namespace detail

inline ScenarioConfig parse_config(const json& j)
{
    detail::ObjectReader r(j, "");
    const json& ver = r.raw("schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != schema_version)
        throw ConfigError("'schema_version' must be " + std::to_string(schema_version));
    ScenarioConfig c;
    c.field = detail::parse_field(r.raw("field"));
    c.particle = detail::parse_particle(r.raw("particle"));
    c.trajectory = detail::parse_trajectory(r.raw("trajectory"));
    if (r.has("run")) c.run = detail::parse_run(r.raw("run"));
    if (r.has("sweep")) c.sweep = detail::parse_sweep(r.raw("sweep"), j);
    r.finish();
    return c;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/**
 * Replaces every {"value": x, "provenance": "paper-given" | "chosen", "note": ...} object by x.
 * With `require_tags`, any bare number is an error: every numeric input must say where it came from.
 */
inline json strip_provenance(const json& j, bool require_tags, const std::string& path = "")
{
    if (j.is_object()) {
        if (j.contains("provenance")) {
            const auto& prov = j.at("provenance");
            if (!prov.is_string() || (prov != "paper-given" && prov != "chosen"))
                throw ConfigError("'" + path + ".provenance' must be \"paper-given\" or \"chosen\"");
            if (!j.contains("value")) throw ConfigError("'" + path + "' has a provenance tag but no value");
            for (const auto& [k, v] : j.items())
                if (k != "value" && k != "provenance" && k != "note")
                    throw ConfigError("unknown key '" + path + "." + k + "' in tagged value");
            return j.at("value");
        }
        json out = json::object();
        for (const auto& [k, v] : j.items()) out[k] = strip_provenance(v, require_tags, path.empty() ? k : path + "." + k);
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(strip_provenance(j[i], require_tags, path + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (require_tags && j.is_number())
        throw ConfigError("'" + path + "' is a bare number; tag it with a provenance");
    return j;
}

// ---------------------------------------------------------------- scenario assembly

/// Natural-unit objects built from a config.
struct BuiltScenario {
    EMField field;
    ParticleCoupling coupling;
    InterferenceLoop loop;
    double omega = 0;     ///< 0 for static fields
    double amplitude = 0;
    double lambda = 0;
    std::optional<ScenarioParams> params; ///< set when the combination has closed forms
    double theta = 0, T = 0, tau = 0;
    double path_scale = 0; ///< spatial length of the first arm
};

inline BuiltScenario build_scenario(const ScenarioConfig& c)
{
    BuiltScenario s;
    const auto& f = c.field;
    const auto& tr = c.trajectory;
    const auto& pa = c.particle;

    // field
    std::optional<WaveguideMode> guide;
    if (f.type == "plane_wave") {
        s.omega = omega_from_wavelength(f.lambda);
        s.amplitude = f.amplitude ? *f.amplitude
                                  : field_amplitude_from_flux(watts_per_cm2(f.flux_W_cm2), PlaneWaveFluxTarget{});
        s.lambda = f.lambda;
        s.field = PlaneWave(s.amplitude, s.omega);
    } else if (f.type == "guide") {
        s.omega = omega_from_wavelength(f.lambda);
        s.amplitude = f.amplitude ? *f.amplitude
                                  : field_amplitude_from_flux(watts_per_cm2(f.flux_W_cm2), GuideFluxTarget{f.a, f.lambda});
        s.lambda = f.lambda;
        guide = WaveguideMode::from_omega(f.mode, s.amplitude, f.a, f.b, f.m, f.l, s.omega);
        s.field = *guide;
    } else if (f.type == "static_uniform") {
        s.field = UniformStaticField{f.E, f.B};
    } else {
        s.field = LineChargeField{f.linear_charge};
    }

    // particle
    if (pa.species == Species::electron)
        s.coupling = Charge{pa.charge};
    else
        s.coupling = Dipole{pa.d, pa.m};

    // trajectory: times follow from the geometry and the speed
    const double v = tr.v;
    const double sarm = std::hypot(tr.lower_alpha.value_or(tr.alpha), tr.l);
    if (tr.kind == "guide") {
        if (!guide) throw ConfigError("trajectory.kind \"guide\" needs field.type \"guide\"");
        s.T = f.b / v;
        s.loop = make_guide_crossing(s.T, *guide, tr.alpha);
    } else {
        if (guide) throw ConfigError("field.type \"guide\" needs trajectory.kind \"guide\"");
        if (tr.kind == "diamond") {
            s.theta = sarm / v;
            s.T = 2.0 * tr.d / v;
            s.loop = make_diamond(s.T, s.theta, tr.d, tr.l, tr.alpha);
        } else if (tr.kind == "ellipse") {
            const double arc = spatial_length(make_ellipse(1.0, tr.halfspan, tr.alpha).path1);
            s.tau = arc / v;
            s.loop = make_ellipse(s.tau, tr.halfspan, tr.alpha);
        } else {
            s.theta = sarm / v;
            s.T = 2.0 * tr.d / v;
            s.tau = s.T / 2 + s.theta;
            s.loop = make_asymmetric(s.tau, s.T, s.theta, tr.d, tr.l, tr.alpha, tr.lower_alpha);
        }
    }
    s.path_scale = spatial_length(s.loop.path1);

    // closed-form parameters (monochromatic fields only)
    if (s.omega > 0 && !tr.lower_alpha) {
        ScenarioParams p;
        p.species = pa.species;
        p.amplitude = s.amplitude;
        p.omega = s.omega;
        p.lambda = s.lambda;
        p.alpha = tr.alpha;
        p.v = v;
        p.charge = pa.species == Species::electron ? pa.charge : constants::elementary_charge_LH;
        p.dip_d = pa.d;
        p.dip_m = pa.m;
        p.L = pa.L;
        if (tr.kind == "guide") {
            p.scenario = f.mode == ModeKind::TE ? Scenario::guide_te : Scenario::guide_tm;
            p.T = s.T;
            p.a = f.a;
            p.b = f.b;
            p.m_index = f.m;
            p.l_index = f.l;
            p.k_y = guide->k_y();
        } else if (tr.kind == "diamond") {
            p.scenario = Scenario::diamond;
            p.theta = s.theta;
            p.T = s.T;
            p.d = tr.d;
            p.l = tr.l;
            p.s = sarm;
        } else if (tr.kind == "ellipse") {
            p.scenario = Scenario::ellipse;
            p.tau = s.tau;
            p.s_prime = s.path_scale;
        } else {
            p.scenario = Scenario::asymmetric;
            p.theta = s.theta;
            p.T = s.T;
            p.tau = s.tau;
            p.d = tr.d;
            p.l = tr.l;
            p.s = sarm;
            p.s_prime = v * s.tau; // distance covered at speed v during tau
        }
        s.params = p;
    }
    return s;
}

} // namespace acphase
