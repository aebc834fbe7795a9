// wec-satlin: Smith-chart, Pareto, saturation and verification reports for a
// current-limited wave energy converter.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wecsat/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Impedance mismatch and current saturation analysis for wave energy converters"};
    std::string command;
    std::string config;
    std::string out;
    bool svg = false;

    app.add_option("command", command, "Analysis to run")
        ->required()
        ->check(CLI::IsMember(wecsat::command_names()));
    app.add_option("--config", config, "Run configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "Output directory (default ./out)");
    app.add_flag("--svg", svg, "Also write SVG figures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return wecsat::exit_config;
    }
    return wecsat::run_cli(command, config, out, svg, std::cerr);
}
