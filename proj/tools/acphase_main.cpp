// acphase command-line front end.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "acphase/report.hpp"

namespace {

int write_output(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "acphase: cannot write '" << out_path << "'\n";
        return acphase::exit_schema;
    }
    out << text;
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace acphase;
    CLI::App app{"Decoherence of dipole and charge interferometers in classical electromagnetic fields"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool show_constants = false;
    bool gnuplot = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "scenario config (JSON)");
        if (config_required) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--seed", seed, "override run.seed");
        sub->add_flag("--show-constants", show_constants, "print the physical constants in use to stderr");
    };
    auto* compute = app.add_subcommand("compute", "loop phase, |C|, visibility and closed-form check");
    add_common(compute, true);
    auto* sweep = app.add_subcommand("sweep", "grid over one config parameter, CSV output");
    add_common(sweep, true);
    sweep->add_flag("--gnuplot", gnuplot, "also write <out>.gp plotting the CSV");
    auto* table1 = app.add_subcommand("table1", "order-of-magnitude table from the defaults file");
    add_common(table1, false);
    auto* xsection = app.add_subcommand("xsection", "scattering cross section and mean-free-path bound");
    add_common(xsection, true);
    auto* mc = app.add_subcommand("mc-check", "Monte-Carlo average of exp(i phi) against J0(|C|)");
    add_common(mc, true);
    app.add_flag("--show-constants", show_constants, "print the physical constants in use");

    CLI11_PARSE(app, argc, argv);

    if (show_constants) std::cerr << constants_json().dump(2) << "\n";
    if (app.get_subcommands().empty()) {
        if (show_constants) return 0;
        std::cerr << app.help();
        return exit_schema;
    }

    try {
        CommandResult r;
        if (compute->parsed()) {
            r = cmd_compute(parse_config(read_json_file(config_path)), seed);
        } else if (sweep->parsed()) {
            r = cmd_sweep(read_json_file(config_path), seed);
            if (gnuplot) {
                if (out_path.empty()) throw ConfigError("--gnuplot needs --out for the CSV path");
                const json raw = read_json_file(config_path);
                std::ofstream gp(out_path + ".gp");
                gp << gnuplot_script(out_path, raw.at("sweep").at("parameter").get<std::string>());
            }
        } else if (table1->parsed()) {
            const std::string path = config_path.empty() ? std::string(ACPHASE_DATA_DIR) + "/table1_defaults.json"
                                                         : config_path;
            r = cmd_table1(read_json_file(path));
        } else if (xsection->parsed()) {
            r = cmd_xsection(parse_config(read_json_file(config_path)));
        } else {
            r = cmd_mc_check(parse_config(read_json_file(config_path)), seed);
        }
        if (int rc = write_output(r.text, out_path)) return rc;
        if (r.exit_code == exit_oracle) std::cerr << "acphase: closed-form deviation above run.oracle_tolerance\n";
        return r.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "acphase: configuration error: " << e.what() << "\n";
        return exit_schema;
    } catch (const DomainError& e) {
        std::cerr << "acphase: invalid input: " << e.what() << "\n";
        return exit_schema;
    } catch (const NumericalError& e) {
        std::cerr << "acphase: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const ModelViolationError& e) {
        std::cerr << "acphase: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const Error& e) {
        std::cerr << "acphase: " << e.what() << "\n";
        return exit_numerical;
    }
}
