// Batch front-end: parses a run config, executes one pipeline, writes the
// JSON report (and CSV artifacts with --out). Exit codes: 0 success,
// 1 config/parameter error, 2 retryable transversality exhaustion,
// 3 validation failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "morsehom/config.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run config (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "Output directory for report.json and CSVs");
    cmd->add_option("--seed", args.seed, "Override the perturbation seed");
    cmd->add_flag("--verbose", args.verbose, "Log progress to stderr");
}

int execute(morsehom::Command command, const CommonArgs& args) {
    try {
        morsehom::RunConfig cfg =
            morsehom::parse_config_file(args.config_path, command, args.seed);
        morsehom::RunOutcome outcome =
            morsehom::run_command(cfg, args.out_dir, std::cerr, args.verbose);
        if (args.out_dir.empty()) std::cout << outcome.report_json;
        return outcome.exit_code;
    } catch (const morsehom::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const morsehom::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local Morse homology toolkit for planar scalar fields"};
    app.require_subcommand(1);

    CommonArgs analyze_args, lagrange_args, continuation_args, oracle_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Perturb, count connections, and compute local homology");
    add_common(analyze, analyze_args);
    CLI::App* lagrange = app.add_subcommand(
        "lagrange", "Two-centers-plus-spring pipeline with the mass homotopy");
    add_common(lagrange, lagrange_args);
    CLI::App* continuation = app.add_subcommand(
        "continuation", "Chain map between two perturbations and invariance checks");
    add_common(continuation, continuation_args);
    CLI::App* oracle = app.add_subcommand(
        "oracle", "Cubical relative-homology ground truth for a builtin field");
    add_common(oracle, oracle_args);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return execute(morsehom::Command::analyze, analyze_args);
    if (lagrange->parsed()) return execute(morsehom::Command::lagrange, lagrange_args);
    if (continuation->parsed())
        return execute(morsehom::Command::continuation, continuation_args);
    if (oracle->parsed()) return execute(morsehom::Command::oracle, oracle_args);
    return 1;
}
