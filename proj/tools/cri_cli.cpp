// Command-line front end: run single scenarios, batch-evaluate the corpus
// with and without risk adaptation, compare suite reports, validate files.

#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "cri/cli_app.hpp"

namespace {

cri::Config make_config(const std::string& config_path) {
    if (config_path.empty()) return cri::Config{};
    return cri::load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Context-aware risk index: scenario simulator and evaluation harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;  // reserved; runs are fully deterministic
    app.add_option("--config", config_path, "configuration file (json)");
    app.add_option("--seed", seed, "reserved for future stochastic features");

    auto* run = app.add_subcommand("run", "run one scenario and write its trace");
    std::string run_scenario_path, run_trace_path, run_cri = "on";
    run->add_option("scenario", run_scenario_path, "scenario file (.scn)")->required();
    run->add_option("--cri", run_cri, "risk adaptation on|off")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--trace", run_trace_path, "trace output path (jsonl)");

    auto* batch = app.add_subcommand("batch", "run a scenario directory twice and compare");
    std::string batch_dir, batch_out = "report", batch_filter;
    int batch_parallel = 0;
    batch->add_option("dir", batch_dir, "directory of .scn files")->required();
    batch->add_option("--out", batch_out, "output file prefix");
    batch->add_option("--filter", batch_filter, "fp|all")->check(CLI::IsMember({"fp", "all"}));
    batch->add_option("--parallel", batch_parallel, "worker threads");

    auto* compare = app.add_subcommand("compare", "compare two suite metric files");
    std::string cmp_baseline, cmp_cri;
    compare->add_option("baseline", cmp_baseline, "baseline suite json")->required();
    compare->add_option("cri", cmp_cri, "risk-adapted suite json")->required();

    auto* validate = app.add_subcommand("validate", "validate scenario or config files");
    std::vector<std::string> validate_paths;
    validate->add_option("files", validate_paths, "files to validate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        cri::Config cfg = make_config(config_path);
        if (run->parsed()) {
            if (run->count("--cri")) cfg.run.cri_enabled = run_cri == "on";
            cri::cli::RunOptions opt;
            opt.scenario_path = run_scenario_path;
            opt.trace_path = run_trace_path;
            opt.cri_enabled = cfg.run.cri_enabled;
            return cri::cli::cmd_run(opt, cfg, std::cout);
        }
        if (batch->parsed()) {
            if (batch->count("--filter")) cfg.run.filter = batch_filter;
            if (batch->count("--parallel")) cfg.run.parallel = batch_parallel;
            cri::validate(cfg);
            cri::cli::BatchOptions opt;
            opt.scenario_dir = batch_dir;
            opt.out_prefix = batch_out;
            opt.filter = cfg.run.filter;
            opt.parallel = cfg.run.parallel;
            return cri::cli::cmd_batch(opt, cfg, std::cout);
        }
        if (compare->parsed()) return cri::cli::cmd_compare(cmp_baseline, cmp_cri, cfg, std::cout);
        if (validate->parsed()) return cri::cli::cmd_validate(validate_paths, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
