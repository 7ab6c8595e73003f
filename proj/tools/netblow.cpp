#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netblow/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Discrete semilinear heat equations on weighted networks: Dirichlet spectra, "
                 "growth-condition checks, blow-up runs and property suites"};
    app.require_subcommand(1);

    std::string graph_path;
    std::string config_path;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;

    auto* spectrum = app.add_subcommand("spectrum", "First Dirichlet eigenpair of a graph");
    spectrum->add_option("graph", graph_path, "edge-list graph file")->required();

    auto* check = app.add_subcommand("check", "Growth-condition report for a configuration");
    check->add_option("config", config_path, "key=value configuration file")->required();

    auto* simulate =
        app.add_subcommand("simulate", "Integrate a run and write the trajectory CSV");
    simulate->add_option("config", config_path, "key=value configuration file")->required();

    auto* find_initial =
        app.add_subcommand("find-initial", "Search for initial data with J(0) > 0");
    find_initial->add_option("config", config_path, "key=value configuration file")->required();

    auto* verify = app.add_subcommand("verify", "Randomized property suites");
    verify->add_option("config", config_path, "key=value configuration file")->required();
    verify->add_option("--trials", trials, "trials per suite");
    verify->add_option("--seed", seed, "splitmix64 seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return netblow::cmd_spectrum(graph_path, std::cout, std::cerr);
        netblow::RunConfig cfg = netblow::RunConfig::load(config_path);
        if (check->parsed()) return netblow::cmd_check(cfg, std::cout, std::cerr);
        if (simulate->parsed()) return netblow::cmd_simulate(cfg, std::cout, std::cerr);
        if (find_initial->parsed()) return netblow::cmd_find_initial(cfg, std::cout, std::cerr);
        if (verify->parsed())
            return netblow::cmd_verify(cfg, trials, seed, std::cout, std::cerr);
    } catch (const netblow::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
