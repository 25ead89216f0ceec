#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adapt/energy.hpp"
#include "adapt/instance.hpp"
#include "adapt/mission.hpp"
#include "adapt/planners.hpp"
#include "adapt/rng.hpp"

namespace adapt {

/// Hidden ground-truth power distributions: prior means shifted by delta_mu,
/// prior standard deviations scaled by (1 + delta_sigma).
struct TruthModel {
    PerRegime<NormalDist> dist;
    double delta_mu = 0.0;
    double delta_sigma = 0.0;
};

TruthModel make_truth(const PerRegime<NormalDist>& priors, double delta_mu, double delta_sigma);

struct SimConfig {
    double reading_period = 20.0;  // s between average-power readings
    double window_length = 900.0;  // s of readings kept for inference
};

struct Observation {
    Regime regime = Regime::cruise;
    double timestamp = 0.0;  // end of the reading interval
    double power = 0.0;      // W, average over the interval
    double duration = 0.0;   // s, reading_period except for a prorated last tick

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Energy of one reading interval, kJ.
inline double reading_energy(const Observation& o) { return o.power * o.duration / 1000.0; }

struct LegRecord {
    int from = 0;
    int to = 0;
    double planned_energy = 0.0;  // prior-mean estimate, kJ
    double actual_energy = 0.0;   // sum of reading energies, kJ
    std::vector<Observation> observations;
    PerRegime<double> durations{};
    bool completed = true;

    friend bool operator==(const LegRecord&, const LegRecord&) = default;
};

struct ChargeRecord {
    int node = 0;
    double start_time = 0.0;
    double prize = 0.0;     // kJ delivered
    double cost = 0.0;      // kJ drawn from the battery
    double duration = 0.0;  // s
    bool completed = true;

    friend bool operator==(const ChargeRecord&, const ChargeRecord&) = default;
};

struct ReplanRecord {
    int at_node = 0;
    double elapsed_time = 0.0;
    double residual = 0.0;
    std::size_t observations_seen = 0;  // readings recorded before this re-plan
    PerRegime<NormalGammaPosterior> posteriors{};
    double theta = 0.0;
    std::vector<int> route;
    double planned_prize = 0.0;
    double planned_cost = 0.0;
    double wall_time = 0.0;  // s, planning call only

    friend bool operator==(const ReplanRecord&, const ReplanRecord&) = default;
};

enum class MissionStatus { success, failure };

/// Which kind of event produced the mission's energy draw, in order.
enum class EventKind { leg, charge };

struct MissionTrace {
    std::string instance;
    std::string planner;
    std::uint64_t seed = 0;
    double delta_mu = 0.0;
    double delta_sigma = 0.0;
    int execution = 0;
    double battery_capacity = 0.0;
    double energy_reserve = 0.0;
    double window_length = 900.0;
    PerRegime<NormalGammaPosterior> ng_priors{};
    std::vector<int> offline_route;
    double offline_planned_prize = 0.0;
    double offline_planned_cost = 0.0;
    std::vector<LegRecord> legs;
    std::vector<ChargeRecord> charges;
    std::vector<EventKind> events;
    std::vector<ReplanRecord> replans;
    double final_residual = 0.0;
    MissionStatus status = MissionStatus::success;
    double total_prize = 0.0;  // P*
    double total_cost = 0.0;   // C*

    std::vector<double> replan_wall_times() const;

    friend bool operator==(const MissionTrace&, const MissionTrace&) = default;
};

/// Fly from the current position to `to` (node id, or the end-depot id).
/// Each regime is split into reading intervals whose power is drawn from the
/// truth (clamped at 0 W); readings enter the window. The leg stops early,
/// with completed = false, as soon as the residual drops below the reserve.
LegRecord simulate_leg(const Instance& inst, MissionState& state, int to, const TruthModel& truth,
                       const SimConfig& cfg, double planned_energy, Rng& rng);

/// Charge an unvisited node in full. If the battery cannot cover the whole
/// charge without dropping below the reserve, nothing is delivered and the
/// record is marked incomplete.
ChargeRecord simulate_charge(const Instance& inst, MissionState& state, int node);

struct MissionSeeds {
    std::uint64_t truth = 0;   // power readings
    std::uint64_t solver = 0;  // online re-plans
};

struct MissionSpec {
    PlannerKind planner = PlannerKind::adapt;
    PlannerConfig config{};
    SimConfig sim{};
};

/// Execute one mission: follow the offline route, re-planning after each
/// charge (except the Offline baseline) until the UAV is back at the end
/// depot or the battery runs dry.
MissionTrace run_mission(const Instance& inst, const PowerModel& model, const MissionSpec& spec,
                         const TruthModel& truth, const MissionSeeds& seeds, const PlanResult& offline);

/// Audit checks on a finished trace; each returns an empty string on success
/// or a description of the first violation.
std::string check_energy_conservation(const MissionTrace& trace);
std::string check_posterior_replay(const MissionTrace& trace);
std::string check_leg_energies(const MissionTrace& trace);

// Trace serialisation (one JSON object per trace).
inline constexpr const char* kTraceFormat = "adapt-trace/1";
std::string trace_to_json(const MissionTrace& trace, bool include_timing = true);
MissionTrace trace_from_json(const std::string& text);

}  // namespace adapt
