// Command-line front end for the guaranteed-minimum-benefit pricing engine.
//
//   gmxb <subcommand> [config-file] [--preset NAME] [--out DIR]
//
// Subcommands: price, control-maps, slice, verify, converge.
// Exit codes: 0 success, 2 config error, 3 certification refusal,
// 4 numerical failure.

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "gmxb/runner.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir;
};

int dispatch(const std::string& subcommand, const CommandArgs& args) {
    using namespace gmxb;
    try {
        RunConfig cfg;
        if (!args.config_path.empty()) {
            cfg = RunConfig::from_file(args.config_path);
        } else if (!args.preset.empty()) {
            cfg = RunConfig::from_preset(args.preset);
        } else {
            throw ConfigError("a config file or --preset is required");
        }
        if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
        run_subcommand(cfg, subcommand);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const CertificationError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        std::cerr << "hint: set [search] allow_uncertified = true to force the "
                     "extreme-point search anyway\n";
        return kExitCertificationRefused;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pricing and verification engine for guaranteed-minimum-benefit "
                 "variable annuities"};
    app.require_subcommand(1);

    static const char* names[] = {"price", "control-maps", "slice", "verify", "converge"};
    static const char* descriptions[] = {
        "Price the contract and write a value summary and action histogram",
        "Export the optimal-action map for every anniversary",
        "Export value slices at fixed x1 around one anniversary",
        "Run the numerical verification suite (gaps, convexity, Monte Carlo)",
        "Run a grid/timestep refinement study"};

    CommandArgs args;
    for (int k = 0; k < 5; ++k) {
        CLI::App* sub = app.add_subcommand(names[k], descriptions[k]);
        sub->add_option("config", args.config_path, "Run configuration file");
        sub->add_option("--preset", args.preset, "Bundled preset (glwb-table1, gmwb-table2)");
        sub->add_option("--out", args.out_dir, "Output directory override");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : gmxb::kExitConfigError;
    }

    return dispatch(app.get_subcommands().front()->get_name(), args);
}
