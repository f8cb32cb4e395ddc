// dislokon: relativistic spectra in a dislocated spacetime with AB flux.
//
//   dislokon spectrum --scenario landau --b0 1 --n-max 2 --l-min -1 --l-max 1
//   dislokon sweep --scenario hardwall --r0 10 --sweep 0:6.283185307179586:9
//   dislokon verify --scenario linear --nu 1 --tol 1e-3
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dislokon/cli.hpp"

namespace {

using dislokon::cli::Settings;

constexpr int kExitInvalidConfig = 2;

struct Invocation {
    std::string config_file;
    std::map<std::string, std::string> flags;
};

void add_setting_flags(CLI::App& cmd, Invocation& inv) {
    cmd.add_option("--config", inv.config_file, "key = value file; flags override its entries");
    for (auto key : dislokon::cli::setting_keys()) {
        const std::string name(key);
        cmd.add_option_function<std::string>(
            "--" + name, [&inv, name](const std::string& v) { inv.flags[name] = v; },
            "setting '" + name + "'");
    }
}

Settings collect_settings(const Invocation& inv) {
    Settings settings;
    if (!inv.config_file.empty()) {
        std::ifstream in(inv.config_file, std::ios::binary);
        if (!in)
            throw dislokon::cli::ConfigError("cannot read config file '" + inv.config_file + "'");
        std::ostringstream text;
        text << in.rdbuf();
        settings = dislokon::cli::parse_settings(text.str());
    }
    for (const auto& [key, value] : inv.flags)
        settings[key] = value;
    return settings;
}

void emit(const dislokon::cli::RunConfig& cfg, const std::string& text) {
    if (cfg.output_path) {
        std::ofstream out(*cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw dislokon::cli::ConfigError("cannot write '" + *cfg.output_path + "'");
        out << text;
    } else {
        std::cout << text;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relativistic bound states of a charged scalar particle in a space-like dislocation"};
    app.require_subcommand(1);

    Invocation spectrum_inv, sweep_inv, verify_inv;
    auto* spectrum = app.add_subcommand("spectrum", "Energy table over n, l and k");
    add_setting_flags(*spectrum, spectrum_inv);
    auto* sweep = app.add_subcommand("sweep", "E+ across an Aharonov-Bohm flux sweep");
    add_setting_flags(*sweep, sweep_inv);
    auto* verify = app.add_subcommand("verify", "Check closed forms against the radial oracle");
    add_setting_flags(*verify, verify_inv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    try {
        if (spectrum->parsed()) {
            const auto cfg = dislokon::cli::build_config(collect_settings(spectrum_inv));
            emit(cfg, dislokon::cli::cmd_spectrum(cfg));
            return 0;
        }
        if (sweep->parsed()) {
            const auto cfg = dislokon::cli::build_config(collect_settings(sweep_inv));
            emit(cfg, dislokon::cli::cmd_sweep_flux(cfg));
            return 0;
        }
        const auto cfg = dislokon::cli::build_config(collect_settings(verify_inv));
        const auto outcome = dislokon::cli::cmd_verify(cfg, cfg.tol);
        emit(cfg, outcome.text);
        return outcome.exit_code;
    } catch (const dislokon::cli::ConfigError& e) {
        std::cerr << "dislokon: invalid configuration: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const dislokon::Error& e) {
        std::cerr << "dislokon: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
}
