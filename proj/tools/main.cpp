#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bistab/config.hpp"
#include "bistab/run.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "experiment config file")->required();
    cmd->add_option("-s,--set", args.overrides,
                    "override a config key, e.g. --set N=400 --set splitting.kind=bern");
    cmd->add_option("-o,--out", args.out_dir, "output directory (overrides out_dir)");
    cmd->add_option("--seed", args.seed, "master seed (overrides seed)");
}

int load_and_run(const CommonArgs& args, int (*runner)(const bistab::ExperimentConfig&)) {
    try {
        std::vector<std::string> overrides = args.overrides;
        if (!args.out_dir.empty()) overrides.push_back("out_dir=" + args.out_dir);
        if (!args.seed.empty()) overrides.push_back("seed=" + args.seed);
        const bistab::ExperimentConfig cfg = bistab::load_config(args.config_path, overrides);
        return runner(cfg);
    } catch (const bistab::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulation and analysis toolkit for conserved two-species reaction networks "
        "with unbiased splitting/resampling"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "print help for every subcommand");

    CommonArgs sim_args, ana_args, qp_args, val_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "run exact jump-process (or limiting-diffusion) sample paths");
    add_common(sim, sim_args);
    CLI::App* ana = app.add_subcommand(
        "analyze", "birth-death absorption statistics and fast-regime conditions");
    add_common(ana, ana_args);
    CLI::App* qp = app.add_subcommand(
        "quasipotential", "barrier integrals, switch-rate predictions, regime label");
    add_common(qp, qp_args);
    CLI::App* val =
        app.add_subcommand("validate", "parse and sanity-check a reaction network");
    add_common(val, val_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (sim->parsed()) return load_and_run(sim_args, bistab::run_simulate);
    if (ana->parsed()) return load_and_run(ana_args, bistab::run_analyze);
    if (qp->parsed()) return load_and_run(qp_args, bistab::run_quasipotential);
    if (val->parsed()) return load_and_run(val_args, bistab::run_validate);
    return 2;
}
