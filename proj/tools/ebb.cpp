#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ebb/errors.hpp"
#include "ebb/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ebb: two-terminal transport through a one-dimensional sample"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", ebb::kToolVersion);

    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::optional<std::uint64_t> seed_override;

    const std::pair<const char*, const char*> commands[] = {
        {"fluxes", "integrate energy, charge and entropy fluxes"},
        {"sweep-e", "transmission and spectral densities over an energy grid"},
        {"sweep-l", "length sweep at fixed energy, with transport classification"},
        {"equivalence", "classify every energy of the grid and count contradictions"},
        {"validate", "run the built-in invariant suite (plus the config's system, if given)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        auto* cfg = sub->add_option("--config", config_path, "JSON configuration")->check(CLI::ExistingFile);
        if (std::string(name) != "validate") cfg->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_option("--seed-override", seed_override, "replace the random-potential seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ebb::kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        ebb::RunOptions options{threads};
        if (config_path.empty()) return ebb::run_validate(nullptr, out_dir, options, std::cout);
        ebb::RunConfig config = ebb::load_config(config_path);
        if (seed_override) ebb::apply_seed_override(config, *seed_override);
        return ebb::run_command(command, config, out_dir, options, std::cout);
    } catch (const ebb::InputError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ebb::kExitConfig;
    } catch (const ebb::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ebb::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return ebb::kExitInvariant;
    }
}
