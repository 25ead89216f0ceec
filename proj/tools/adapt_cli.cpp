// Command-line front end: instance generation, experiments, sweeps, audits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adapt/harness.hpp"

namespace fs = std::filesystem;
using namespace adapt;

namespace {

struct RunOptions {
    std::string config;
    std::string out;
    int workers = 0;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("-c,--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("-o,--out", o.out, "output directory (overrides the config)");
    cmd->add_option("-j,--workers", o.workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    cmd->add_option("-s,--seed", o.seed, "root seed (overrides the config)");
    cmd->add_flag("-q,--quiet", o.quiet, "no progress output");
}

ExperimentConfig resolve(const RunOptions& o) {
    ExperimentConfig cfg = load_experiment_config(o.config);
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.workers > 0) cfg.workers = o.workers;
    if (o.seed) cfg.root_seed = *o.seed;
    return cfg;
}

ProgressFn progress_printer(bool quiet) {
    if (quiet) return {};
    return [](std::size_t done, std::size_t total) {
        if (done == total || done % 50 == 0) std::fprintf(stderr, "\r%zu/%zu", done, total);
        if (done == total) std::fprintf(stderr, "\n");
    };
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error(p.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_validate(const fs::path& target) {
    const fs::path traces = fs::is_directory(target) ? target / "traces.jsonl" : target;
    const ValidationReport rep = validate_trace_file(traces);
    for (const auto& p : rep.problems) std::cout << "FAIL " << p << '\n';
    bool ok = rep.problems.empty();
    std::cout << rep.traces << " traces, " << rep.problems.size() << " problems\n";
    if (fs::is_directory(target) && fs::exists(target / "metrics.csv")) {
        const auto all = read_trace_file(traces);
        const auto rows = metrics_by_cell(all);
        const bool same = metrics_csv(rows) == slurp(target / "metrics.csv");
        std::cout << "metrics.csv " << (same ? "matches" : "does NOT match") << " the traces\n";
        ok = ok && same;
    }
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ADAPT: adaptive probabilistic planning for UAV sensor charging"};
    app.require_subcommand(1);

    GeneratorOptions gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "generate a random instance");
    generate->add_option("-n,--nodes", gen.n_nodes, "number of sensor nodes")->check(CLI::PositiveNumber);
    generate->add_option("--side", gen.area_side, "side of the square field, m")->check(CLI::PositiveNumber);
    generate->add_option("-s,--seed", gen.seed, "generator seed");
    generate->add_option("-o,--out", gen_out, "output file (stdout if omitted)");

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "run an experiment grid");
    add_run_options(run, run_opts);

    RunOptions sweep_opts;
    std::vector<double> grid{0.45, 0.55, 0.65, 0.75, 0.85};
    auto* sweep = app.add_subcommand("sweep-theta", "theta_min sensitivity sweep (ADAPT only)");
    add_run_options(sweep, sweep_opts);
    sweep->add_option("-g,--grid", grid, "theta_min values")->delimiter(',');

    std::string validate_target;
    auto* validate = app.add_subcommand("validate", "audit a trace file or run directory");
    validate->add_option("path", validate_target, "traces.jsonl or a run output directory")
        ->required()
        ->check(CLI::ExistingPath);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            const Instance inst = generate_instance(gen);
            if (gen_out.empty())
                std::cout << instance_to_text(inst);
            else
                save_instance(inst, gen_out);
            return 0;
        }
        if (run->parsed()) {
            const ExperimentConfig cfg = resolve(run_opts);
            const ExperimentResult res = run_experiment(cfg, progress_printer(run_opts.quiet));
            write_experiment(cfg, res, cfg.output_dir);
            std::cout << metrics_csv(res.metrics);
            return 0;
        }
        if (sweep->parsed()) {
            const ExperimentConfig cfg = resolve(sweep_opts);
            const auto blocks = theta_sensitivity_sweep(cfg, grid, progress_printer(sweep_opts.quiet));
            fs::create_directories(cfg.output_dir);
            const std::string csv = sweep_csv(blocks);
            std::ofstream(cfg.output_dir / "theta_sweep.csv", std::ios::binary) << csv;
            std::cout << csv;
            return 0;
        }
        if (validate->parsed()) return cmd_validate(validate_target);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
