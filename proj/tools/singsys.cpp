// Command-line front end for the singular Samuelson model.
//
//   singsys simulate --a 0.5 --b 1 --gbar 1 --horizon 40 --out run.csv
//   singsys eigen    --config scenario.cfg
//   singsys verify   --config scenario.cfg
//   singsys plot     --config scenario.cfg --out run.svg

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "singsys/cli/commands.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::vector<std::pair<std::string, std::optional<std::string>>> values{
        {"a", {}},  {"b", {}},       {"gbar", {}},   {"t0", {}},  {"t1", {}},
        {"t2", {}}, {"horizon", {}}, {"engine", {}}, {"out", {}},
    };
};

void add_scenario_options(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config, "Scenario file with key = value lines");
    for (auto& [key, value] : o.values) {
        cmd.add_option("--" + key, value, "Override '" + key + "'");
    }
}

int execute(singsys::cli::Command command, const Overrides& o) {
    using namespace singsys::cli;
    ScenarioConfig cfg;
    try {
        if (o.config) {
            apply_config_text(cfg, read_file(*o.config));
        }
        for (const auto& [key, value] : o.values) {
            if (value) {
                apply_setting(cfg, key, *value);
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
    return run_command(command, cfg, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    using singsys::cli::Command;
    CLI::App app{"Singular (descriptor) Samuelson multiplier-accelerator toolkit"};
    app.require_subcommand(1);

    const std::vector<std::pair<Command, std::pair<std::string, std::string>>> commands{
        {Command::Simulate, {"simulate", "Write the trajectory as CSV (k,T,C,I,G)"}},
        {Command::Eigen, {"eigen", "Report the pencil eigenstructure and regime"}},
        {Command::Verify, {"verify", "Cross-check all engines against the recursion"}},
        {Command::Plot, {"plot", "Write an SVG plot of T, C and I"}},
    };
    std::vector<Overrides> overrides(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.add_subcommand(commands[i].second.first, commands[i].second.second);
        add_scenario_options(*sub, overrides[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return singsys::cli::kExitConfig;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            return execute(commands[i].first, overrides[i]);
        }
    }
    return singsys::cli::kExitConfig;
}
