// featcomp: runs the experiments from a config file.
//   featcomp --config configs/sweep.ini sweep
//   featcomp --set sweep.replicates=3 --out-dir out/sweep3 sweep

#include <CLI11.hpp>

#include <iostream>

#include "featcomp/runner.hpp"

using namespace featcomp;

int main(int argc, char** argv) {
    CLI::App app{"feature competition experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "global seed (overrides run.seed)");
    app.add_option("--out-dir", out_dir, "output directory (overrides run.out_dir)");
    app.add_option("--set", overrides, "section.key=value override, repeatable");
    app.add_flag("-q,--quiet", quiet, "do not echo the summary");

    using Cmd = cli::CommandResult (*)(const cli::RunConfig&);
    const std::vector<std::tuple<const char*, const char*, Cmd>> cmds{
        {"surface", "analytic signal surface over the rho grid", cli::cmd_surface},
        {"sweep", "two-phase probe sweep and correlation", cli::cmd_sweep},
        {"table1", "probe accuracy of trained vs untrained extractors", cli::cmd_table1},
        {"gansim", "discrete GAN identities and balancing traces", cli::cmd_gansim},
        {"micalc", "entropies and conditional MI of a pmf file", cli::cmd_micalc},
    };
    Cmd chosen = nullptr;
    for (const auto& [name, help, fn] : cmds) {
        app.add_subcommand(name, help)->callback([&chosen, f = fn] { chosen = f; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        cli::RunConfig c = config_path.empty() ? cli::RunConfig{} : cli::load_config(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw cli::ConfigError("--set expects section.key=value, got '" + o + "'");
            cli::set_key(c, o.substr(0, eq), o.substr(eq + 1));
        }
        if (seed) c.seed = *seed;
        if (!out_dir.empty()) c.out_dir = out_dir;
        c.validate();

        const cli::CommandResult r = chosen(c);
        if (!quiet) std::cout << r.summary;
        return r.exit_code;
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        // unreadable inputs and unwritable outputs land here
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
