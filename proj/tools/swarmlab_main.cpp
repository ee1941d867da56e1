#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "swarmlab/experiment.hpp"

// Exit codes: 0 success, 1 config or input validation failure, 2 runtime
// failure while executing a valid experiment.
int main(int argc, char** argv) {
    CLI::App app{"swarmlab: deterministic swarm-intelligence experiments"};
    app.set_version_flag("--version", std::string(SWARMLAB_VERSION));
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    std::string out_override;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("config", config_path, "path to the experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--seed", seed_override, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    run->add_option("--out", out_override, "override the output directory");
    run->add_flag("--quiet", quiet, "suppress the summary lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        swarmlab::ExperimentConfig config = swarmlab::load_config(config_path);
        if (seed_given) config.seed = seed_override;
        if (!out_override.empty()) config.output = out_override;

        swarmlab::RunManifest manifest = swarmlab::run_experiment(config);
        if (!quiet) {
            for (const auto& [name, digest] : manifest.outputs) {
                std::cout << "wrote " << (config.output / name).string() << " (" << manifest.digest_algorithm
                          << " " << digest << ")\n";
            }
            std::cout << "wrote " << (config.output / "manifest.json").string() << "\n";
        }
        return 0;
    } catch (const swarmlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
