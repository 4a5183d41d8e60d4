/**
 * @file  report.hpp
 * @brief Command implementations behind the acphase CLI: compute, sweep, table1, xsection, mc-check.
 *
 * Every command returns its text output and an exit code:
 *   0 ok, 2 closed-form deviation above run.oracle_tolerance,
 *   3 schema or validation error, 4 numerical failure.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "acphase/closed_forms.hpp"
#include "acphase/config.hpp"
#include "acphase/phase_engine.hpp"
#include "acphase/scattering.hpp"
#include "acphase/units.hpp"

namespace acphase {

enum ExitCode : int { exit_ok = 0, exit_oracle = 2, exit_schema = 3, exit_numerical = 4 };

struct CommandResult {
    std::string text;
    int exit_code = exit_ok;
};

/// Scientific notation, 9 significant digits.
inline std::string csv_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

inline PhaseOptions phase_options(const RunConfig& r)
{
    PhaseOptions o;
    o.rel_tol = r.rel_tol;
    o.abs_tol_factor = r.abs_tol_factor;
    return o;
}

/// Least-squares slope of log y against log x; nullopt if any value is not positive.
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) return std::nullopt;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0) return std::nullopt;
    return (n * sxy - sx * sy) / den;
}

struct ComputeOutcome {
    PhaseCoefficients coeffs;
    VisibilityResult vis;
    std::optional<ClosedForm> closed;
    /// max(|dA|, |dB|) / |C|; zero when both |C| lie below the quadrature resolution
    /// rel_tol * integral |a.dx| (a closed form that vanishes identically).
    std::optional<double> deviation;
    std::optional<Estimate> estimate;
};

inline ComputeOutcome run_compute(const ScenarioConfig& c, const BuiltScenario& s, std::uint64_t seed)
{
    ComputeOutcome out;
    const Connection conn{s.coupling, s.field};
    const PhaseOptions opt = phase_options(c.run);
    double resolution = 0;
    if (s.omega > 0) {
        const ExtractionReport rep = extract_AB_detailed(s.loop, conn, s.omega, opt);
        out.coeffs = rep.coeffs;
        resolution = opt.rel_tol * rep.abs_scale;
    } else {
        out.coeffs = PhaseCoefficients::from(loop_phase(s.loop, conn, 0.0, opt), 0.0);
    }
    out.vis = evaluate_visibility(out.coeffs, c.run.mc_samples, seed);
    if (s.params) {
        try {
            out.closed = exact_form(*s.params);
        } catch (const ConfigError&) {
            // no closed form for this combination
        }
        try {
            out.estimate = estimate_form(*s.params);
        } catch (const ConfigError&) {
        } catch (const DomainError&) {
        }
        if (out.closed) {
            const double dA = std::fabs(out.closed->A - out.coeffs.A);
            const double dB = std::fabs(out.closed->B - out.coeffs.B);
            const double scale = std::max(out.closed->Cmag, out.coeffs.Cmag);
            out.deviation = scale > resolution ? std::max(dA, dB) / scale : 0.0;
        }
    }
    return out;
}

inline json visibility_json(const VisibilityResult& v)
{
    json j{{"F", v.F}, {"small_phase", v.small_phase}};
    if (v.mc)
        j["mc_estimate"] = {{"re", v.mc->mean.real()},
                            {"im", v.mc->mean.imag()},
                            {"stderr_re", v.mc->stderr_re},
                            {"stderr_im", v.mc->stderr_im},
                            {"modulus", v.mc->modulus()},
                            {"samples", v.mc->samples}};
    else
        j["mc_estimate"] = nullptr;
    return j;
}

inline json constants_json()
{
    using namespace constants;
    return {{"hbar_c_eV_m", hbar_c_eV_m},
            {"hbar_eV_s", hbar_eV_s},
            {"speed_of_light_m_s", speed_of_light_m_s},
            {"fine_structure", fine_structure},
            {"elementary_charge_LH", elementary_charge_LH},
            {"electron_mass_eV", electron_mass_eV},
            {"atomic_mass_unit_eV", atomic_mass_unit_eV},
            {"sodium_mass_eV", sodium_mass_eV},
            {"source", "CODATA 2018"}};
}

inline CommandResult cmd_compute(const ScenarioConfig& c, std::optional<std::uint64_t> seed_override = std::nullopt)
{
    const BuiltScenario s = build_scenario(c);
    const std::uint64_t seed = seed_override.value_or(c.run.seed);
    const ComputeOutcome r = run_compute(c, s, seed);
    json j;
    j["trajectory"] = s.loop.kind;
    j["species"] = to_string(c.particle.species);
    j["A"] = r.coeffs.A;
    j["B"] = r.coeffs.B;
    j["Cmag"] = r.coeffs.Cmag;
    const json vis = visibility_json(r.vis);
    for (const auto& [k, v] : vis.items()) j[k] = v;
    j["seed"] = seed;
    if (r.closed)
        j["closed_form"] = {{"id", r.closed->id},
                            {"A", r.closed->A},
                            {"B", r.closed->B},
                            {"Cmag", r.closed->Cmag},
                            {"relative_deviation", *r.deviation}};
    else
        j["closed_form"] = nullptr;
    if (r.estimate)
        j["estimate"] = {{"id", r.estimate->id}, {"Cmag", r.estimate->value}};
    else
        j["estimate"] = nullptr;
    j["inputs_natural"] = {{"omega_eV", s.omega},   {"amplitude", s.amplitude}, {"theta", s.theta},
                           {"T", s.T},              {"tau", s.tau},             {"path_length", s.path_scale},
                           {"v", c.trajectory.v}};
    CommandResult out{j.dump(2) + "\n", exit_ok};
    if (r.deviation && *r.deviation > c.run.oracle_tolerance) out.exit_code = exit_oracle;
    return out;
}

inline std::string gnuplot_script(const std::string& csv_path, const std::string& parameter)
{
    std::ostringstream g;
    g << "# gnuplot script for " << csv_path << "\n"
      << "set datafile separator ','\n"
      << "set datafile commentschars '#'\n"
      << "set key autotitle columnhead\n"
      << "set logscale xy\n"
      << "set xlabel '" << parameter << "'\n"
      << "set ylabel '|C|'\n"
      << "plot '" << csv_path << "' using 1:4 with linespoints title 'quadrature', \\\n"
      << "     '' using 1:6 with lines title 'closed form', \\\n"
      << "     '' using 1:7 with lines title 'estimate'\n";
    return g.str();
}

/// `raw` is the config document; each grid point rewrites raw[block][key] and re-parses it.
inline CommandResult cmd_sweep(const json& raw, std::optional<std::uint64_t> seed_override = std::nullopt)
{
    const ScenarioConfig base = parse_config(raw);
    if (!base.sweep) throw ConfigError("sweep command needs a 'sweep' block in the config");
    const auto& sw = *base.sweep;
    const auto dot = sw.parameter.find('.');
    const std::string block = sw.parameter.substr(0, dot), key = sw.parameter.substr(dot + 1);

    std::ostringstream csv;
    csv << "parameter_value,A,B,Cmag,F,closed_form_Cmag,estimate_Cmag\n";
    std::vector<double> xs, yq, yc, ye;
    bool have_closed = true, have_est = true;
    int code = exit_ok;
    for (double value : sw.values) {
        json point = raw;
        point[block][key] = value;
        const ScenarioConfig c = parse_config(point);
        const BuiltScenario s = build_scenario(c);
        const ComputeOutcome r = run_compute(c, s, seed_override.value_or(c.run.seed));
        const double closed = r.closed ? r.closed->Cmag : std::nan("");
        const double est = r.estimate ? r.estimate->value : std::nan("");
        csv << csv_number(value) << ',' << csv_number(r.coeffs.A) << ',' << csv_number(r.coeffs.B) << ','
            << csv_number(r.coeffs.Cmag) << ',' << csv_number(r.vis.F) << ',' << csv_number(closed) << ','
            << csv_number(est) << '\n';
        xs.push_back(value);
        yq.push_back(r.coeffs.Cmag);
        yc.push_back(closed);
        ye.push_back(est);
        have_closed = have_closed && r.closed.has_value();
        have_est = have_est && r.estimate.has_value();
        if (r.deviation && *r.deviation > c.run.oracle_tolerance) code = exit_oracle;
    }
    if (key == "v_over_c") {
        auto show = [](std::optional<double> s) { return s ? csv_number(*s) : std::string("nan"); };
        csv << "# summary,loglog_slope_vs_v,quadrature=" << show(loglog_slope(xs, yq))
            << ",closed_form=" << show(have_closed ? loglog_slope(xs, yc) : std::nullopt)
            << ",estimate=" << show(have_est ? loglog_slope(xs, ye) : std::nullopt) << '\n';
    }
    return {csv.str(), code};
}

// ---------------------------------------------------------------- order-of-magnitude table

struct Table1Row {
    std::string trajectory;
    std::string species;
    std::string method; ///< "estimate" or "closed_form"
    std::string formula_id;
    double computed = 0;
    double closed_form = std::nan("");
    double quadrature = std::nan("");
    double table_value = 0;
    bool pass = false;

    double log10_ratio() const { return std::log10(computed) - std::log10(table_value); }
};

struct Table1Options {
    bool quadrature = true;
};

inline std::vector<Table1Row> table1_rows(const json& defaults_tagged, const Table1Options& opt = {})
{
    const json d = strip_provenance(defaults_tagged, true);
    detail::ObjectReader top(d, "");
    const json& ver = top.raw("schema_version");
    if (!ver.is_number_integer() || ver.get<int>() != schema_version)
        throw ConfigError("table1 defaults: 'schema_version' must be " + std::to_string(schema_version));
    if (top.has("description")) top.raw("description");
    const json& rows = top.raw("rows");
    if (top.has("sensitivity")) top.raw("sensitivity");
    top.finish();
    if (!rows.is_array() || rows.size() != 8) throw ConfigError("table1 defaults: 'rows' must hold 8 entries");

    std::vector<Table1Row> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail::ObjectReader r(rows[i], "rows[" + std::to_string(i) + "]");
        Table1Row row;
        row.trajectory = r.string("trajectory");
        row.method = r.string("method");
        row.table_value = detail::positive(r.number("table_C"), "table_C");
        const ScenarioConfig c = parse_config(r.raw("scenario"));
        r.finish();
        row.species = to_string(c.particle.species);
        const BuiltScenario s = build_scenario(c);
        if (!s.params) throw ConfigError("table1 row " + std::to_string(i) + " has no closed form");
        const ClosedForm cf = exact_form(*s.params);
        row.closed_form = cf.Cmag;
        if (row.method == "estimate") {
            const Estimate e = estimate_form(*s.params);
            row.formula_id = e.id;
            row.computed = e.value;
        } else if (row.method == "closed_form") {
            row.formula_id = cf.id;
            row.computed = cf.Cmag;
        } else {
            throw ConfigError("table1 row " + std::to_string(i) + ": method must be estimate or closed_form");
        }
        if (opt.quadrature)
            row.quadrature = extract_AB(s.loop, Connection{s.coupling, s.field}, s.omega, phase_options(c.run)).Cmag;
        row.pass = row.computed > 0 && std::fabs(row.log10_ratio()) <= 1.0;
        out.push_back(row);
    }
    return out;
}

/// Diamond and asymmetric rows re-evaluated with theta scaled (via the arm length l).
inline std::string table1_sensitivity_csv(const json& defaults_tagged)
{
    const json d = strip_provenance(defaults_tagged, true);
    std::vector<double> factors = {0.75, 1.5, 3.0};
    if (d.contains("sensitivity") && d.at("sensitivity").contains("theta_factors")) {
        factors.clear();
        for (const auto& f : d.at("sensitivity").at("theta_factors")) factors.push_back(f.get<double>());
    }
    std::ostringstream csv;
    csv << "trajectory,species,theta_factor,theta_natural,estimate_C,closed_form_C\n";
    for (const auto& row : d.at("rows")) {
        const std::string kind = row.at("scenario").at("trajectory").at("kind").get<std::string>();
        if (kind != "diamond" && kind != "asymmetric") continue;
        const ScenarioConfig base = parse_config(row.at("scenario"));
        const double s0 = std::hypot(base.trajectory.alpha, base.trajectory.l);
        for (double f : factors) {
            ScenarioConfig c = base;
            const double s = f * s0;
            if (!(s > c.trajectory.alpha)) continue;
            c.trajectory.l = std::sqrt(s * s - c.trajectory.alpha * c.trajectory.alpha);
            const BuiltScenario b = build_scenario(c);
            csv << kind << ',' << to_string(c.particle.species) << ',' << csv_number(f) << ','
                << csv_number(b.theta) << ',' << csv_number(estimate_form(*b.params).value) << ','
                << csv_number(exact_form(*b.params).Cmag) << '\n';
        }
    }
    return csv.str();
}

inline CommandResult cmd_table1(const json& defaults_tagged)
{
    const auto rows = table1_rows(defaults_tagged);
    std::ostringstream csv;
    csv << "trajectory,species,method,formula_id,computed_C,closed_form_C,quadrature_C,table_C,log10_ratio,pass\n";
    for (const auto& r : rows)
        csv << r.trajectory << ',' << r.species << ',' << r.method << ',' << r.formula_id << ','
            << csv_number(r.computed) << ',' << csv_number(r.closed_form) << ',' << csv_number(r.quadrature) << ','
            << csv_number(r.table_value) << ',' << csv_number(r.log10_ratio()) << ',' << (r.pass ? "true" : "false")
            << '\n';
    csv << "\n# theta sensitivity (diamond and asymmetric rows)\n" << table1_sensitivity_csv(defaults_tagged);
    return {csv.str(), exit_ok};
}

// ---------------------------------------------------------------- cross sections

inline json xsection_json(const ScenarioConfig& c)
{
    const BuiltScenario s = build_scenario(c);
    if (!(s.omega > 0)) throw ConfigError("xsection needs a monochromatic field (plane_wave or guide)");
    ScatteringParams p;
    p.m_A = c.particle.mass;
    p.d = c.particle.d;
    p.m = c.particle.m;
    p.k = s.omega;
    p.L = c.particle.L.value_or(0);
    const bool dipole = c.particle.species == Species::dipole;
    CrossSection sigma;
    std::string formula;
    bool approximated = false;
    if (const auto* g = std::get_if<WaveguideMode>(&s.field)) {
        p.k_y = g->k_y();
        if (g->kind() == ModeKind::TE) {
            sigma = sigma_te(p, c.particle.species);
            formula = dipole ? "sigma_TE_dipole" : "sigma_TE_electron";
        } else {
            if (!dipole) throw ConfigError("xsection: no electron cross section for TM modes");
            const auto tm = sigma_tm(p);
            sigma = tm.sigma;
            approximated = tm.approximated;
            formula = "sigma_TM_dipole (= sigma_TE_dipole)";
        }
    } else {
        p.k_y = s.omega;
        sigma = dipole ? sigma_dipole_planewave(p) : sigma_thomson();
        formula = dipole ? "sigma_dipole_planewave" : "sigma_thomson";
    }
    double rho = 0;
    if (c.field.amplitude) {
        const FluxTarget target = std::holds_alternative<WaveguideMode>(s.field)
                                      ? FluxTarget{GuideFluxTarget{c.field.a, c.field.lambda}}
                                      : FluxTarget{PlaneWaveFluxTarget{}};
        rho = to_natural(watts_per_cm2(flux_W_cm2_from_amplitude(s.amplitude, target)));
    } else {
        rho = to_natural(watts_per_cm2(c.field.flux_W_cm2));
    }
    const double n = photon_density(rho, s.omega);
    const double flux = from_natural(rho, Dimension::energy_flux).value * 1e-4;
    const FieldBoundReport b = max_field_bound(sigma.natural, n, s.path_scale, c.run.margin, flux);
    json j{{"species", to_string(c.particle.species)},
           {"formula", formula},
           {"sigma_natural", sigma.natural},
           {"sigma_m2", sigma.m2},
           {"photon_density_natural", n},
           {"path_scale_m", s.path_scale * constants::hbar_c_eV_m},
           {"margin", b.margin},
           {"pass", b.pass},
           {"unbounded", b.unbounded},
           {"tm_equals_te_approximation", approximated}};
    if (b.unbounded) {
        j["l_mfp_m"] = nullptr;
        j["max_flux_W_cm2"] = nullptr;
    } else {
        j["l_mfp_m"] = b.l_mfp_m;
        j["max_flux_W_cm2"] = b.max_flux_W_cm2;
    }
    return j;
}

inline CommandResult cmd_xsection(const ScenarioConfig& c) { return {xsection_json(c).dump(2) + "\n", exit_ok}; }

// ---------------------------------------------------------------- Monte-Carlo check

inline CommandResult cmd_mc_check(const ScenarioConfig& c, std::optional<std::uint64_t> seed_override = std::nullopt)
{
    const BuiltScenario s = build_scenario(c);
    if (!(s.omega > 0)) throw ConfigError("mc-check needs a monochromatic field");
    const std::uint64_t n = c.run.mc_samples ? c.run.mc_samples : 1'000'000;
    const std::uint64_t seed = seed_override.value_or(c.run.seed);
    const PhaseCoefficients co = extract_AB(s.loop, Connection{s.coupling, s.field}, s.omega, phase_options(c.run));
    const MonteCarloEstimate mc = monte_carlo_visibility(co, n, seed);
    const double j0 = visibility(co);
    const bool re_ok = std::fabs(mc.mean.real() - j0) <= 3.0 * mc.stderr_re || mc.mean.real() == j0;
    const bool im_ok = std::fabs(mc.mean.imag()) <= 3.0 * mc.stderr_im || mc.mean.imag() == 0.0;
    json j{{"Cmag", co.Cmag},
           {"J0", j0},
           {"mc_re", mc.mean.real()},
           {"mc_im", mc.mean.imag()},
           {"stderr_re", mc.stderr_re},
           {"stderr_im", mc.stderr_im},
           {"samples", n},
           {"seed", seed},
           {"within_3_sigma", re_ok && im_ok}};
    return {j.dump(2) + "\n", exit_ok};
}

} // namespace acphase
