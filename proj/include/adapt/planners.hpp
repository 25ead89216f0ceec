#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adapt/energy.hpp"
#include "adapt/instance.hpp"
#include "adapt/mission.hpp"
#include "adapt/solver.hpp"

namespace adapt {

enum class PlannerKind { offline, romp, weighted_err, mc_greedy, adapt };

std::string_view planner_name(PlannerKind k);
PlannerKind parse_planner(std::string_view name);

struct PlannerConfig {
    double theta_min = 0.75;
    double theta_max = 0.999;
    int n_theta_candidates = 5;
    double w_theta = 0.5;
    double w_prize = 0.5;
    AcsParams acs{};
    int mc_samples = 100;
    bool mc_shared_seed = false;  // one solver seed for every MC sample
    double w_act = 0.5;
    double w_est = 0.5;
    NgPriorConfig ng{};

    /// Throws ConfigError when out of range.
    void validate() const;
};

/// Prior knowledge shared by every planner: per-regime power priors and the
/// NG hyperparameters derived from them.
struct PowerModel {
    PerRegime<NormalDist> priors;
    PerRegime<NormalGammaPosterior> ng_priors;

    static PowerModel from_flight(const FlightProfile& flight, const NgPriorConfig& ng = {});
    RegimePowers prior_means() const;
};

/// Signals that the remaining budget is exhausted.
class MissionOverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Deterministic planning graph rooted at the UAV's position: targets are the
/// unvisited nodes in id order with prizes and charging costs at the current
/// mission time, edge costs scaled by `travel_scale`.
/// Throws MissionOverError when residual minus reserve is not positive.
CostGraph build_cost_graph(const Instance& inst, const MissionState& state, const RegimePowers& powers,
                           double travel_scale = 1.0);

/// Map a route of node ids into the graph, dropping ids it no longer holds.
PathSolution path_from_route(const CostGraph& g, std::span<const int> route);

/// Interior node ids of a path in visiting order.
std::vector<int> route_of(const CostGraph& g, const PathSolution& path);

/// Planner output in node-id space.
struct PlanResult {
    std::vector<int> route;  // targets in visiting order, depots excluded
    double planned_prize = 0.0;
    double planned_cost = 0.0;
    double theta = 0.0;  // safety belief of the chosen path (ADAPT only)
    RegimePowers powers{};
};

PlanResult plan_offline(const Instance& inst, const PowerModel& model, const AcsParams& acs);

struct CandidatePath {
    double theta = 0.0;
    PathSolution solution;
    std::vector<int> route;
    double score = 0.0;
};

/// Weighted safety/prize score of each candidate. Theta is normalised over
/// [theta_min, theta_max]; prize over the candidates' own range, with a
/// degenerate range contributing zero.
std::vector<double> score_candidates(std::span<const CandidatePath> candidates, const PlannerConfig& cfg);

/// Collapse identical routes (keeping the highest theta), score, and return
/// the argmax; ties go to the higher theta.
CandidatePath select_candidate(std::vector<CandidatePath> candidates, const PlannerConfig& cfg);

struct AdaptOutcome {
    CandidatePath chosen;
    std::vector<CandidatePath> candidates;  // one per theta level that was feasible
};

AdaptOutcome plan_online_adapt(const Instance& inst, const MissionState& state, const PowerModel& model,
                               const PlannerConfig& cfg, std::span<const int> inherited, std::uint64_t seed);

PlanResult plan_romp(const Instance& inst, const MissionState& state, const PowerModel& model,
                     const AcsParams& acs, std::span<const int> inherited, std::uint64_t seed);

/// Most recent flight leg: prior-mean estimate and measured energy, kJ.
struct LegEnergy {
    double estimated = 0.0;
    double actual = 0.0;
};

/// w_act * ((actual - estimated) / estimated + 1) + w_est; 1 without a leg.
double weighted_error_ratio(const std::optional<LegEnergy>& last_leg, double w_act, double w_est);

PlanResult plan_weighted_err(const Instance& inst, const MissionState& state, const PowerModel& model,
                             const PlannerConfig& cfg, const std::optional<LegEnergy>& last_leg,
                             std::span<const int> inherited, std::uint64_t seed);

struct RouteSample {
    std::vector<int> route;
    double prize = 0.0;
    double cost = 0.0;
};

/// Index of the representative of the most frequent route; ties go to the
/// higher prize, then the lower cost, then the earliest sample.
std::size_t most_frequent_route(std::span<const RouteSample> samples);

PlanResult plan_mcgreedy(const Instance& inst, const MissionState& state, const PowerModel& model,
                         const PlannerConfig& cfg, std::span<const int> inherited, std::uint64_t seed);

/// Dispatch one online re-plan for the given baseline or ADAPT.
PlanResult replan(PlannerKind kind, const Instance& inst, const MissionState& state, const PowerModel& model,
                  const PlannerConfig& cfg, const std::optional<LegEnergy>& last_leg,
                  std::span<const int> inherited, std::uint64_t seed);

}  // namespace adapt
