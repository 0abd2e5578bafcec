#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ramsey/cli.hpp"

int main(int argc, char** argv) {
    using namespace ramsey::cli;

    CLI::App app{"Ramsey optimal policy solver with exogenous forcing variables"};
    std::string command;
    RunConfig cfg;
    std::string format;
    double tol = 0.0;
    unsigned long long seed = 0;

    app.add_option("command", command, "validate | check | solve | irf | simulate | var | oracle-compare")
        ->required()
        ->check(CLI::IsMember({"validate", "check", "solve", "irf", "simulate", "var", "oracle-compare"}));
    app.add_option("--model", cfg.model_path, "Model file (JSON)")->required();
    app.add_option("--horizon", cfg.horizon, "Simulation / oracle horizon")->default_val(500);
    app.add_option("--shock", cfg.shock_index, "Forcing variable index for irf")->default_val(0);
    app.add_option("--format", format, "json | csv (default: csv for irf/simulate, json otherwise)")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* tol_opt = app.add_option("--tol-riccati", tol, "Riccati convergence tolerance (relative)");
    app.add_flag("--force", cfg.force, "Continue when the controllability rank test fails");
    auto* seed_opt = app.add_option("--seed", seed, "simulate: draw unit normal shocks with this seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    cfg.command = *parse_command(command);
    cfg.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::automatic;
    if (*tol_opt) cfg.tol_riccati = tol;
    if (*seed_opt) cfg.seed = seed;
    return run(cfg, std::cout, std::cerr);
}
