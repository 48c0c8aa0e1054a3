#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "esmem/cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace esmem::cli;

    CLI::App app{"Simulator and analytics for naturally error-suppressing quantum memories"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Overrides overrides;
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", overrides.seed, "Master seed");
        cmd->add_option("--trajectories", overrides.trajectories, "Number of Monte Carlo trajectories");
        cmd->add_option("--out-dir", overrides.out_dir, "Output directory");
        cmd->add_option("--threads", overrides.threads, "Worker threads (results do not depend on it)");
    };

    std::string config_path;

    auto* simulate = app.add_subcommand("simulate", "Run an ensemble and fit the decay");
    simulate->add_option("config", config_path, "JSON configuration")->required();
    add_overrides(simulate);

    std::vector<double> j_tau0{1.0, 2.0, 3.0, 5.0};
    auto* sweep = app.add_subcommand("sweep", "Fitted T2 against J*tau0 with the analytic prediction");
    sweep->add_option("config", config_path, "JSON configuration")->required();
    sweep->add_option("--j-tau0", j_tau0, "J*tau0 values")->delimiter(',');
    add_overrides(sweep);

    bool table_csv = false;
    bool table_exact = false;
    auto* table1 = app.add_subcommand("table1", "Natural suppression vs active correction table");
    table1->add_flag("--csv", table_csv, "CSV instead of aligned text");
    table1->add_flag("--exact", table_exact, "Add exactly solved columns");

    auto* spectrum = app.add_subcommand("spectrum", "Empirical vs analytic noise spectral density");
    spectrum->add_option("config", config_path, "JSON configuration")->required();
    add_overrides(spectrum);

    auto* codes = app.add_subcommand("codes", "Phase-flip code utilities");
    codes->require_subcommand(1);
    std::size_t count = 100;
    std::uint64_t code_seed = 1;
    auto* roundtrip = codes->add_subcommand("roundtrip", "Encode/decode random logical states");
    roundtrip->add_option("--count", count, "Number of random states");
    roundtrip->add_option("--seed", code_seed, "Seed");

    std::string code_name = "two";
    int flip = 0;
    auto* syndrome = codes->add_subcommand("syndrome", "Stabilizer values after a single phase flip");
    syndrome->add_option("--code", code_name, "two or three")->check(CLI::IsMember({"two", "three"}));
    syndrome->add_option("--flip", flip, "1-based qubit hit by sigma_z (0 = none)");

    double epsilon = 0.01;
    std::uint64_t rounds = 1'000'000;
    auto* active = codes->add_subcommand("active-mc", "Monte Carlo of three-qubit active correction");
    active->add_option("--epsilon", epsilon, "Per-qubit phase-flip probability");
    active->add_option("--rounds", rounds, "Correction rounds");
    active->add_option("--seed", code_seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    if (*simulate) return cmd_simulate(config_path, overrides, std::cout, std::cerr);
    if (*sweep) return cmd_sweep(config_path, j_tau0, overrides, std::cout, std::cerr);
    if (*table1) return cmd_table1(std::cout, table_csv, table_exact);
    if (*spectrum) return cmd_spectrum(config_path, overrides, std::cout, std::cerr);
    if (*roundtrip) return cmd_codes_roundtrip(count, code_seed, std::cout);
    if (*syndrome) return cmd_codes_syndrome(code_name == "two" ? 2 : 3, flip, std::cout, std::cerr);
    if (*active) return cmd_codes_active_mc(epsilon, rounds, code_seed, std::cout, std::cerr);
    return kExitFailure;
}
