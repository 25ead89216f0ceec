#pragma once

#include <vector>

#include "adapt/energy.hpp"
#include "adapt/instance.hpp"

namespace adapt {

/// Execution-time view of the UAV and the sensor field, passed to planners.
struct MissionState {
    int current_node = 0;  // 0 = start depot, otherwise a node id
    Vec3 position;
    double battery_capacity = 0.0;
    double consumed = 0.0;      // kJ drawn from the battery so far
    double elapsed_time = 0.0;  // s
    std::vector<int> unvisited; // ascending node ids
    ObservationWindow window;

    double residual_energy() const { return battery_capacity - consumed; }

    static MissionState at_start(const Instance& inst, const ObservationWindow& window);

    void mark_visited(int node_id);
    bool is_unvisited(int node_id) const;
};

}  // namespace adapt
