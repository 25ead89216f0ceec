#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adapt/instance.hpp"
#include "adapt/planners.hpp"
#include "adapt/sim.hpp"

namespace adapt {

/// Where an experiment gets an instance: a file, or the generator.
struct InstanceSource {
    std::optional<std::filesystem::path> file;
    std::optional<GeneratorOptions> generator;
};

struct ExperimentConfig {
    std::vector<InstanceSource> instances;
    std::vector<PlannerKind> planners{PlannerKind::offline, PlannerKind::romp, PlannerKind::weighted_err,
                                      PlannerKind::mc_greedy, PlannerKind::adapt};
    std::vector<double> delta_mu_grid{-0.10, 0.0, 0.10, 0.20};
    std::vector<double> delta_sigma_grid{-0.10, 0.0, 0.10, 0.20};
    int n_executions = 50;
    std::uint64_t root_seed = 0;
    PlannerConfig planner{};
    SimConfig sim{};
    std::optional<double> energy_reserve;  // overrides every instance's reserve
    std::filesystem::path output_dir = "out";
    bool write_traces = true;
    int workers = 1;

    /// Throws ConfigError when out of range.
    void validate() const;
};

/// Parse the JSON experiment config. Relative instance paths resolve against
/// base_dir. Throws ConfigError with the offending key.
ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Materialise every instance source, applying the reserve override.
std::vector<Instance> load_instances(const ExperimentConfig& cfg);

struct MetricsRecord {
    std::string instance;
    std::string planner;
    double delta_mu = 0.0;
    double delta_sigma = 0.0;
    int executions = 0;
    int successes = 0;
    double msr = 0.0;
    // Over successful executions only; empty when there are none.
    std::optional<double> mean_prize;
    std::optional<double> sd_prize;
    std::optional<double> mean_cost;
    std::optional<double> sd_cost;
    // Wall time of online re-plans over all executions, s.
    double mean_replan_time = 0.0;
    double max_replan_time = 0.0;
    int replans = 0;
};

/// Metrics of one (instance, planner, delta_mu, delta_sigma) cell. Throws
/// std::invalid_argument on an empty or mixed set.
MetricsRecord compute_metrics(std::span<const MissionTrace> traces);

/// One record per cell, in the order the traces list them.
std::vector<MetricsRecord> metrics_by_cell(std::span<const MissionTrace> traces);

inline constexpr const char* kMetricsSchema = "adapt-metrics/1";

/// Deterministic metrics table (no timing columns).
std::string metrics_csv(std::span<const MetricsRecord> rows);
/// Re-plan wall-time table.
std::string timing_csv(std::span<const MetricsRecord> rows);

struct ExperimentSeeds {
    std::uint64_t offline = 0;
    MissionSeeds mission;
};

/// Hierarchical seeds: root -> instance -> cell -> execution -> role. The
/// offline seed depends only on (instance, execution).
ExperimentSeeds experiment_seeds(std::uint64_t root, const std::string& instance, double delta_mu,
                                 double delta_sigma, int execution);

struct ExperimentResult {
    std::vector<Instance> instances;
    std::vector<MissionTrace> traces;  // sorted by instance, planner, delta_mu, delta_sigma, execution
    std::vector<MetricsRecord> metrics;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Write metrics.csv, timing.csv, and (if enabled) traces.jsonl.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result,
                      const std::filesystem::path& dir);

struct SweepBlock {
    double theta_min = 0.0;
    ExperimentResult result;
};

/// Re-run the grid once per theta_min with identical seeding. Requires ADAPT
/// in the planner list; only ADAPT is run.
std::vector<SweepBlock> theta_sensitivity_sweep(const ExperimentConfig& cfg, std::span<const double> theta_grid,
                                                const ProgressFn& progress = {});

/// Metrics table with a leading theta_min column, one block per value.
std::string sweep_csv(std::span<const SweepBlock> blocks);

/// Audit of an archived trace file (JSON lines).
struct ValidationReport {
    std::size_t traces = 0;
    std::vector<std::string> problems;  // "<file>:<line>: <message>"
};

ValidationReport validate_trace_file(const std::filesystem::path& path);

/// Read every trace in a JSON-lines file.
std::vector<MissionTrace> read_trace_file(const std::filesystem::path& path);

}  // namespace adapt
