#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
    using namespace nullctl::cli;

    CLI::App app{"nullctl: null-controllability certificates, controller synthesis and closed-loop checks"};
    app.require_subcommand(1);

    CertifyArgs certify_args;
    auto* certify = app.add_subcommand("certify", "Check the hypotheses and print the certificate");
    certify->add_option("--config", certify_args.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    certify->add_option("--out", certify_args.out, "Write the certificate JSON here");
    certify->add_option("--rho", certify_args.rho, "Override the Gronwall parameter rho");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Run the certified closed loop and verify the envelope");
    simulate->add_option("--config", simulate_args.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    simulate->add_option("--certificate", simulate_args.certificate, "Certificate JSON (certified on the fly if omitted)")
        ->check(CLI::ExistingFile);
    simulate->add_option("--out", simulate_args.out, "Trajectory CSV for the x0 run");
    simulate->add_option("--plot", simulate_args.plot, "SVG plot of |x - x*| against the envelope");
    simulate->add_option("--theta-res", simulate_args.theta_res, "Terminal residue 1 - t/T (default 1e-8)");
    simulate->add_option("--threshold", simulate_args.threshold, "Terminal norm threshold (default 1e-3)");
    simulate->add_flag("--rk4", simulate_args.rk4, "Use fixed-step RK4 instead of Dormand-Prince");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Tabulate mu over a parameter grid");
    sweep->add_option("--config", sweep_args.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", sweep_args.axis, "omega, gamma0 or poles")
        ->check(CLI::IsMember({"omega", "gamma0", "poles"}));
    sweep->add_option("--from", sweep_args.from, "First grid value")->required();
    sweep->add_option("--to", sweep_args.to, "Last grid value")->required();
    sweep->add_option("--step", sweep_args.step, "Grid spacing")->required();
    sweep->add_option("--delta", sweep_args.delta, "Hold delta fixed instead of delta = -eta*omega");
    sweep->add_option("--out", sweep_args.out, "CSV output path (stdout if omitted)");

    GlobalArgs global_args;
    auto* global = app.add_subcommand("global", "Check the global null-controllability conditions");
    global->add_option("--config", global_args.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    global->add_option("--mu", global_args.mu, "Produce (omega, Gamma0, K) certifying this radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*certify)
        return cmd_certify(certify_args, std::cout, std::cerr);
    if (*simulate)
        return cmd_simulate(simulate_args, std::cout, std::cerr);
    if (*sweep)
        return cmd_sweep(sweep_args, std::cout, std::cerr);
    return cmd_global(global_args, std::cout, std::cerr);
}
