#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "chirp/error.hpp"
#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Chirped-drive ladder climbing and autoresonance simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--override", overrides, "section.key=value, repeatable");
        sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    };
    auto* simulate = app.add_subcommand("simulate", "propagate one run; trajectory CSV + summary JSON");
    auto* wigner = app.add_subcommand("wigner", "Wigner function of a snapshot");
    auto* threshold = app.add_subcommand("threshold", "bisected quantum threshold per P2 column");
    auto* isomorphism = app.add_subcommand("isomorphism", "subharmonic run against its effective-fundamental twin");
    auto* classical = app.add_subcommand("classical", "classical trajectory and thresholds");
    for (auto* sub : {simulate, wigner, threshold, isomorphism, classical}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
        const auto config = chirp::cli::load_config(config_path, overrides);
        if (*simulate) return chirp::cli::cmd_simulate(config, std::cout);
        if (*wigner) return chirp::cli::cmd_wigner(config, std::cout);
        if (*threshold) return chirp::cli::cmd_threshold(config, threads, std::cout);
        if (*isomorphism) return chirp::cli::cmd_isomorphism(config, std::cout);
        return chirp::cli::cmd_classical(config, threads, std::cout);
    } catch (const chirp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const chirp::NumericalGuardError& e) {
        std::cerr << "numerical guard '" << e.guard() << "' failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
