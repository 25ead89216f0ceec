#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adapt/common.hpp"

namespace adapt {

// Units: energy in kJ, power in W, time in s, length in m.

struct NodeSpec {
    int id = 0;
    Vec3 position;
    double initial_voltage = 0.0;  // V

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

/// Inductive charger feeding a supercapacitor bank at each sensor node.
struct ChargerModel {
    double capacitance = 10.0;        // F
    double v_max = 42.0;              // V
    double v_min = 20.0;              // V
    double avg_current = 0.825;       // A, constant-current stage
    double eta_ipt = 0.4;             // IPT link efficiency
    double eta_cc = 0.9;              // CC charger efficiency
    double depletion_rate = 2.19e-6;  // kJ/s drained by the sensor

    /// Largest chargeable energy, 0.5*C*(Vmax^2 - Vmin^2), in kJ.
    double max_prize() const;

    friend bool operator==(const ChargerModel&, const ChargerModel&) = default;
};

struct FlightProfile {
    double cruise_altitude = 30.0;     // m
    double speed_takeoff = 3.0;        // m/s
    double speed_cruise = 10.0;        // m/s
    double speed_landing = 2.0;        // m/s
    double uav_mass = 3.93;            // kg
    double air_density = 1.225;        // kg/m^3
    double battery_capacity = 359.64;  // kJ
    double energy_reserve = 0.0;       // kJ

    friend bool operator==(const FlightProfile&, const FlightProfile&) = default;
};

/// Durations of the three flight regimes for one hop, in seconds.
struct LegDurations {
    double takeoff = 0.0;
    double cruise = 0.0;
    double landing = 0.0;
};

struct Instance {
    std::string name;
    std::vector<NodeSpec> nodes;  // ids 1..N in order
    Vec3 start_depot;
    Vec3 end_depot;
    ChargerModel charger;
    FlightProfile flight;

    /// Node by id; ids are contiguous from 1.
    const NodeSpec& node(int id) const { return nodes.at(static_cast<std::size_t>(id - 1)); }
    int end_depot_id() const { return static_cast<int>(nodes.size()) + 1; }

    /// Throws ParseError naming the violated invariant.
    void validate() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Chargeable energy of a node after elapsed_t seconds, capped at the
/// capacitor's usable range. Throws std::invalid_argument for negative time.
double node_prize(const NodeSpec& node, const ChargerModel& charger, double elapsed_t);

/// Energy drawn from the UAV battery to deliver node_prize.
double charge_cost(const NodeSpec& node, const ChargerModel& charger, double elapsed_t);

/// Time to deliver a given prize through the CC stage. Throws ModelError if
/// the prize exceeds what the capacitor can hold.
double charge_time_for_prize(double prize_kj, const ChargerModel& charger);

double charge_time(const NodeSpec& node, const ChargerModel& charger, double elapsed_t);

LegDurations leg_durations(const Vec3& from, const Vec3& to, const FlightProfile& flight);

/// Takeoff + cruise + landing energy for a hop at the given per-regime
/// average powers. Throws std::invalid_argument unless all powers are > 0.
double travel_cost(const Vec3& from, const Vec3& to, const FlightProfile& flight,
                   const RegimePowers& powers);

inline double travel_cost(const NodeSpec& from, const NodeSpec& to, const FlightProfile& flight,
                          const RegimePowers& powers) {
    return travel_cost(from.position, to.position, flight, powers);
}

struct GeneratorOptions {
    int n_nodes = 20;
    double area_side = 1000.0;
    std::uint64_t seed = 0;
    Vec3 start_depot{};
    Vec3 end_depot{};
    ChargerModel charger{};
    FlightProfile flight{};
};

/// Uniform node placement on the ground over [0, side]^2 and uniform initial
/// voltages over [Vmin, Vmax). Deterministic in the seed; a larger n with the
/// same seed is not guaranteed to extend a smaller instance.
Instance generate_instance(const GeneratorOptions& opts);

inline constexpr const char* kInstanceFormat = "adapt-instance/1";

std::string instance_to_text(const Instance& inst);
Instance instance_from_text(const std::string& text);
void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

}  // namespace adapt
