#include "adapt/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace adapt {

TruthModel make_truth(const PerRegime<NormalDist>& priors, double delta_mu, double delta_sigma) {
    if (!(1.0 + delta_sigma >= 0.0)) throw std::invalid_argument("make_truth: 1 + delta_sigma must be >= 0");
    TruthModel t;
    t.delta_mu = delta_mu;
    t.delta_sigma = delta_sigma;
    for (auto r : kAllRegimes) {
        const double scale = 1.0 + delta_sigma;
        t.dist[r] = NormalDist{(1.0 + delta_mu) * priors[r].mean, scale * scale * priors[r].variance};
    }
    return t;
}

std::vector<double> MissionTrace::replan_wall_times() const {
    std::vector<double> out;
    out.reserve(replans.size());
    for (const auto& r : replans) out.push_back(r.wall_time);
    return out;
}

namespace {

Vec3 position_of(const Instance& inst, int id) {
    if (id == 0) return inst.start_depot;
    if (id == inst.end_depot_id()) return inst.end_depot;
    return inst.node(id).position;
}

bool below_reserve(const Instance& inst, const MissionState& s) {
    return s.residual_energy() < inst.flight.energy_reserve;
}

}  // namespace

LegRecord simulate_leg(const Instance& inst, MissionState& state, int to, const TruthModel& truth,
                       const SimConfig& cfg, double planned_energy, Rng& rng) {
    if (!(cfg.reading_period > 0.0)) throw std::invalid_argument("simulate_leg: reading period must be positive");
    if (to != inst.end_depot_id() && !state.is_unvisited(to))
        throw std::invalid_argument("simulate_leg: node " + std::to_string(to) + " is not reachable");

    const Vec3 target = position_of(inst, to);
    const LegDurations d = leg_durations(state.position, target, inst.flight);

    LegRecord leg;
    leg.from = state.current_node;
    leg.to = to;
    leg.planned_energy = planned_energy;
    leg.durations[Regime::takeoff] = d.takeoff;
    leg.durations[Regime::cruise] = d.cruise;
    leg.durations[Regime::landing] = d.landing;

    for (auto r : kAllRegimes) {
        const double total = leg.durations[r];
        if (!(total > 0.0)) continue;
        const auto ticks = static_cast<long>(std::ceil(total / cfg.reading_period - 1e-9));
        const double sd = truth.dist[r].sd();
        for (long k = 0; k < ticks; ++k) {
            const double dt = k + 1 < ticks ? cfg.reading_period : total - static_cast<double>(ticks - 1) * cfg.reading_period;
            const double power = std::max(0.0, rng.normal(truth.dist[r].mean, sd));
            Observation obs{r, state.elapsed_time + dt, power, dt};
            const double e = reading_energy(obs);
            leg.actual_energy += e;
            state.consumed += e;
            state.elapsed_time = obs.timestamp;
            state.window.push(r, obs.timestamp, obs.power);
            leg.observations.push_back(obs);
            if (below_reserve(inst, state)) {
                leg.completed = false;
                return leg;
            }
        }
    }
    state.position = target;
    state.current_node = to;
    return leg;
}

ChargeRecord simulate_charge(const Instance& inst, MissionState& state, int node) {
    if (!state.is_unvisited(node))
        throw std::invalid_argument("simulate_charge: node " + std::to_string(node) + " is not unvisited");
    const NodeSpec& spec = inst.node(node);
    ChargeRecord c;
    c.node = node;
    c.start_time = state.elapsed_time;
    const double prize = node_prize(spec, inst.charger, state.elapsed_time);
    const double cost = charge_cost(spec, inst.charger, state.elapsed_time);
    if (state.residual_energy() - cost < inst.flight.energy_reserve) {
        c.completed = false;
        return c;
    }
    c.prize = prize;
    c.cost = cost;
    c.duration = charge_time(spec, inst.charger, state.elapsed_time);
    state.consumed += cost;
    state.elapsed_time += c.duration;
    state.mark_visited(node);
    return c;
}

MissionTrace run_mission(const Instance& inst, const PowerModel& model, const MissionSpec& spec,
                         const TruthModel& truth, const MissionSeeds& seeds, const PlanResult& offline) {
    MissionTrace trace;
    trace.instance = inst.name;
    trace.planner = std::string(planner_name(spec.planner));
    trace.seed = seeds.truth;
    trace.delta_mu = truth.delta_mu;
    trace.delta_sigma = truth.delta_sigma;
    trace.battery_capacity = inst.flight.battery_capacity;
    trace.energy_reserve = inst.flight.energy_reserve;
    trace.window_length = spec.sim.window_length;
    trace.ng_priors = model.ng_priors;
    trace.offline_route = offline.route;
    trace.offline_planned_prize = offline.planned_prize;
    trace.offline_planned_cost = offline.planned_cost;

    MissionState state = MissionState::at_start(inst, ObservationWindow(spec.sim.window_length, spec.sim.reading_period));
    Rng rng(seeds.truth);
    const RegimePowers estimate = model.prior_means();
    std::vector<int> route = offline.route;
    std::optional<LegEnergy> last_leg;
    std::size_t observations_seen = 0;
    bool failed = false;

    auto fly = [&](int to) {
        const double planned = travel_cost(state.position, position_of(inst, to), inst.flight, estimate);
        LegRecord leg = simulate_leg(inst, state, to, truth, spec.sim, planned, rng);
        observations_seen += leg.observations.size();
        last_leg = LegEnergy{leg.planned_energy, leg.actual_energy};
        const bool ok = leg.completed;
        trace.legs.push_back(std::move(leg));
        trace.events.push_back(EventKind::leg);
        return ok;
    };

    while (!route.empty()) {
        const int next = route.front();
        route.erase(route.begin());
        if (!state.is_unvisited(next)) continue;
        if (!fly(next)) {
            failed = true;
            break;
        }
        ChargeRecord c = simulate_charge(inst, state, next);
        const bool charged = c.completed;
        trace.charges.push_back(c);
        trace.events.push_back(EventKind::charge);
        if (!charged) {
            failed = true;
            break;
        }
        if (spec.planner == PlannerKind::offline || state.unvisited.empty()) continue;

        ReplanRecord rec;
        rec.at_node = state.current_node;
        rec.elapsed_time = state.elapsed_time;
        rec.residual = state.residual_energy();
        rec.observations_seen = observations_seen;
        rec.posteriors = posteriors_from_window(model.ng_priors, state.window);
        const std::uint64_t seed = derive_seed(seeds.solver, {static_cast<std::uint64_t>(trace.replans.size())});
        const auto t0 = std::chrono::steady_clock::now();
        PlanResult plan = replan(spec.planner, inst, state, model, spec.config, last_leg, route, seed);
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.theta = plan.theta;
        rec.route = plan.route;
        rec.planned_prize = plan.planned_prize;
        rec.planned_cost = plan.planned_cost;
        route = std::move(plan.route);
        trace.replans.push_back(std::move(rec));
    }
    if (!failed) failed = !fly(inst.end_depot_id());

    trace.status = failed ? MissionStatus::failure : MissionStatus::success;
    trace.final_residual = state.residual_energy();
    trace.total_cost = state.consumed;
    for (const auto& c : trace.charges) trace.total_prize += c.prize;
    return trace;
}

// --- audits ---------------------------------------------------------------------

std::string check_leg_energies(const MissionTrace& trace) {
    for (std::size_t i = 0; i < trace.legs.size(); ++i) {
        const auto& leg = trace.legs[i];
        double e = 0.0;
        for (const auto& o : leg.observations) e += reading_energy(o);
        if (e != leg.actual_energy) {
            std::ostringstream os;
            os.precision(17);
            os << "leg " << i << ": actual_energy " << leg.actual_energy << " != sum of readings " << e;
            return os.str();
        }
    }
    return {};
}

std::string check_energy_conservation(const MissionTrace& trace) {
    if (auto err = check_leg_energies(trace); !err.empty()) return err;
    std::size_t n_legs = 0;
    std::size_t n_charges = 0;
    for (auto e : trace.events) (e == EventKind::leg ? n_legs : n_charges)++;
    if (n_legs != trace.legs.size() || n_charges != trace.charges.size())
        return "event list does not match the recorded legs and charges";

    double consumed = 0.0;
    double prize = 0.0;
    bool dipped = false;
    std::size_t li = 0;
    std::size_t ci = 0;
    for (auto e : trace.events) {
        if (e == EventKind::leg) {
            for (const auto& o : trace.legs[li].observations) {
                consumed += reading_energy(o);
                if (trace.battery_capacity - consumed < trace.energy_reserve) dipped = true;
            }
            ++li;
        } else {
            const auto& c = trace.charges[ci++];
            if (!c.completed) {
                if (c.prize != 0.0 || c.cost != 0.0) return "incomplete charge delivered energy";
                dipped = true;
                continue;
            }
            consumed += c.cost;
            prize += c.prize;
        }
    }
    std::ostringstream os;
    os.precision(17);
    if (consumed != trace.total_cost) {
        os << "C* " << trace.total_cost << " != replayed consumption " << consumed;
        return os.str();
    }
    if (trace.battery_capacity - consumed != trace.final_residual) {
        os << "final residual " << trace.final_residual << " != capacity - consumption "
           << trace.battery_capacity - consumed;
        return os.str();
    }
    if (prize != trace.total_prize) {
        os << "P* " << trace.total_prize << " != sum of delivered prizes " << prize;
        return os.str();
    }
    const bool failed = trace.status == MissionStatus::failure;
    if (failed != dipped) return failed ? "failure recorded without dropping below the reserve"
                                        : "success recorded after dropping below the reserve";
    if (!failed && (trace.legs.empty() || !trace.legs.back().completed))
        return "successful mission does not end with a completed leg";
    return {};
}

std::string check_posterior_replay(const MissionTrace& trace) {
    std::vector<const Observation*> all;
    for (const auto& leg : trace.legs)
        for (const auto& o : leg.observations) all.push_back(&o);
    for (std::size_t i = 0; i < trace.replans.size(); ++i) {
        const auto& rec = trace.replans[i];
        if (rec.observations_seen > all.size())
            return "re-plan " + std::to_string(i) + " claims more observations than recorded";
        ObservationWindow w(trace.window_length);
        for (std::size_t k = 0; k < rec.observations_seen; ++k) w.push(all[k]->regime, all[k]->timestamp, all[k]->power);
        const auto post = posteriors_from_window(trace.ng_priors, w);
        for (auto r : kAllRegimes) {
            if (!(post[r] == rec.posteriors[r]))
                return "re-plan " + std::to_string(i) + ": " + std::string(regime_name(r)) +
                       " posterior does not match the replayed observations";
        }
    }
    return {};
}

}  // namespace adapt
