#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hofbauer/geometry.hpp"

using namespace hofbauer::cli;

int main(int argc, char** argv) {
    CLI::App app{"Markov extensions of Misiurewicz polynomials in the external-angle model"};
    app.require_subcommand(1, 1);
    std::string config, out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    const std::map<std::string, std::string> help{
        {"tower-build", "build the tower up to level R and run structural checks"},
        {"tower-export", "write the built tower as Graphviz"},
        {"census", "surviving-path and cutpoint census with exact bound checks"},
        {"lift", "Cesaro lifts of Brolin samples and the liftability verdict"},
        {"lyapunov", "Lyapunov exponents, entropy and the Dirac check at beta"},
        {"induce", "first returns to the witness region, Kac and Abramov"},
        {"conformal", "conformal exponent, weights and the Lyapunov/liftability experiment"},
        {"report", "collect results of earlier commands into report.json"},
    };
    for (const std::string& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", config, "run config (INI or JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "master seed (overrides sampling.seed)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunContext ctx = make_context(load_config(config, seed), out, threads);
        const int code = run_command(command, ctx);
        if (code == kCheckFailure) std::cerr << command << ": check failure, see outputs in " << ctx.out << "\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DependencyError& e) {
        std::cerr << "dependency error: " << e.what() << "\n";
        return kDependencyError;
    } catch (const hofbauer::LandingError& e) {
        std::cerr << command << ": landing failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << command << ": " << e.what() << "\n";
        return 1;
    }
}
