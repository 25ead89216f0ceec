#include "adapt/planners.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "adapt/rng.hpp"

namespace adapt {

// --- MissionState -------------------------------------------------------------

MissionState MissionState::at_start(const Instance& inst, const ObservationWindow& window) {
    MissionState s;
    s.current_node = 0;
    s.position = inst.start_depot;
    s.battery_capacity = inst.flight.battery_capacity;
    s.window = window;
    s.unvisited.reserve(inst.nodes.size());
    for (const auto& n : inst.nodes) s.unvisited.push_back(n.id);
    return s;
}

void MissionState::mark_visited(int node_id) {
    auto it = std::lower_bound(unvisited.begin(), unvisited.end(), node_id);
    if (it == unvisited.end() || *it != node_id)
        throw std::invalid_argument("node " + std::to_string(node_id) + " is not unvisited");
    unvisited.erase(it);
}

bool MissionState::is_unvisited(int node_id) const {
    return std::binary_search(unvisited.begin(), unvisited.end(), node_id);
}

// --- config -------------------------------------------------------------------

std::string_view planner_name(PlannerKind k) {
    switch (k) {
        case PlannerKind::offline: return "Offline";
        case PlannerKind::romp: return "ROMP";
        case PlannerKind::weighted_err: return "WeightedErr";
        case PlannerKind::mc_greedy: return "MCGreedy";
        case PlannerKind::adapt: return "ADAPT";
    }
    return "?";
}

PlannerKind parse_planner(std::string_view name) {
    for (auto k : {PlannerKind::offline, PlannerKind::romp, PlannerKind::weighted_err, PlannerKind::mc_greedy,
                   PlannerKind::adapt}) {
        std::string a(planner_name(k)), b(name);
        std::transform(a.begin(), a.end(), a.begin(), ::tolower);
        std::transform(b.begin(), b.end(), b.begin(), ::tolower);
        if (a == b) return k;
    }
    throw ConfigError("unknown planner '" + std::string(name) + "'");
}

void PlannerConfig::validate() const {
    if (!(theta_min > 0.0 && theta_min < theta_max && theta_max < 1.0))
        throw ConfigError("PlannerConfig: need 0 < theta_min < theta_max < 1");
    if (n_theta_candidates < 1) throw ConfigError("PlannerConfig: n_theta_candidates must be positive");
    if (mc_samples < 1) throw ConfigError("PlannerConfig: mc_samples must be positive");
    if (std::fabs(w_theta + w_prize - 1.0) > 1e-9 || w_theta < 0.0 || w_prize < 0.0)
        throw ConfigError("PlannerConfig: w_theta and w_prize must be nonnegative and sum to 1");
    if (std::fabs(w_act + w_est - 1.0) > 1e-9 || w_act < 0.0 || w_est < 0.0)
        throw ConfigError("PlannerConfig: w_act and w_est must be nonnegative and sum to 1");
    acs.validate();
}

PowerModel PowerModel::from_flight(const FlightProfile& flight, const NgPriorConfig& ng) {
    PowerModel m;
    m.priors = default_priors(flight);
    for (auto r : kAllRegimes) m.ng_priors[r] = ng_from_normal(m.priors[r], ng);
    return m;
}

RegimePowers PowerModel::prior_means() const {
    RegimePowers p;
    for (auto r : kAllRegimes) p[r] = priors[r].mean;
    return p;
}

// --- graph construction -------------------------------------------------------------

CostGraph build_cost_graph(const Instance& inst, const MissionState& state, const RegimePowers& powers,
                           double travel_scale) {
    const double budget = state.residual_energy() - inst.flight.energy_reserve;
    if (!(budget > 0.0)) throw MissionOverError("residual energy is at or below the reserve");
    if (!(travel_scale > 0.0)) throw std::invalid_argument("build_cost_graph: travel scale must be positive");

    const int n = static_cast<int>(state.unvisited.size()) + 2;
    CostGraph g(n);
    g.budget = budget;
    std::vector<Vec3> pos(static_cast<std::size_t>(n));
    g.labels[0] = state.current_node;
    pos[0] = state.position;
    for (int i = 1; i + 1 < n; ++i) {
        const auto& node = inst.node(state.unvisited[i - 1]);
        g.labels[i] = node.id;
        pos[i] = node.position;
        g.prize[i] = node_prize(node, inst.charger, state.elapsed_time);
        g.service_cost[i] = charge_cost(node, inst.charger, state.elapsed_time);
    }
    g.labels[n - 1] = inst.end_depot_id();
    pos[n - 1] = inst.end_depot;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.edge(i, j) = travel_scale * travel_cost(pos[i], pos[j], inst.flight, powers);
    return g;
}

PathSolution path_from_route(const CostGraph& g, std::span<const int> route) {
    std::map<int, int> vertex_of;
    for (int v = 1; v < g.end(); ++v) vertex_of[g.labels[v]] = v;
    std::vector<int> seq{g.start()};
    for (int id : route) {
        auto it = vertex_of.find(id);
        if (it == vertex_of.end()) continue;
        seq.push_back(it->second);
        vertex_of.erase(it);
    }
    seq.push_back(g.end());
    return evaluate_path(g, std::move(seq));
}

std::vector<int> route_of(const CostGraph& g, const PathSolution& path) {
    std::vector<int> r;
    for (std::size_t i = 1; i + 1 < path.sequence.size(); ++i) r.push_back(g.labels[path.sequence[i]]);
    return r;
}

namespace {

PlanResult to_plan(const CostGraph& g, const PathSolution& s, const RegimePowers& powers) {
    return {route_of(g, s), s.total_prize, s.total_cost, 0.0, powers};
}

PlanResult direct_return(const CostGraph& g, const RegimePowers& powers) {
    return to_plan(g, evaluate_path(g, {g.start(), g.end()}), powers);
}

PlanResult solve_on(const CostGraph& g, const AcsParams& acs, std::span<const int> inherited, std::uint64_t seed,
                    const RegimePowers& powers) {
    AcsParams p = acs;
    p.rng_seed = seed;
    try {
        return to_plan(g, solve_iacs(g, p, path_from_route(g, inherited)), powers);
    } catch (const InfeasibleError&) {
        return direct_return(g, powers);
    }
}

PlanResult mission_over(const Instance& inst, const MissionState& state, const RegimePowers& powers) {
    PlanResult r;
    r.powers = powers;
    r.planned_cost = travel_cost(state.position, inst.end_depot, inst.flight, powers);
    return r;
}

}  // namespace

PlanResult plan_offline(const Instance& inst, const PowerModel& model, const AcsParams& acs) {
    const MissionState start = MissionState::at_start(inst, ObservationWindow{});
    const RegimePowers powers = model.prior_means();
    const CostGraph g = build_cost_graph(inst, start, powers);
    return to_plan(g, solve_iacs(g, acs), powers);
}

// --- ADAPT ------------------------------------------------------------------------

std::vector<double> score_candidates(std::span<const CandidatePath> candidates, const PlannerConfig& cfg) {
    std::vector<double> scores;
    if (candidates.empty()) return scores;
    double p_min = candidates.front().solution.total_prize;
    double p_max = p_min;
    for (const auto& c : candidates) {
        p_min = std::min(p_min, c.solution.total_prize);
        p_max = std::max(p_max, c.solution.total_prize);
    }
    const double theta_span = cfg.theta_max - cfg.theta_min;
    const double prize_span = p_max - p_min;
    for (const auto& c : candidates) {
        const double theta_term = theta_span > 0.0 ? (c.theta - cfg.theta_min) / theta_span : 0.0;
        const double prize_term = prize_span > 0.0 ? (c.solution.total_prize - p_min) / prize_span : 0.0;
        scores.push_back(cfg.w_theta * theta_term + cfg.w_prize * prize_term);
    }
    return scores;
}

CandidatePath select_candidate(std::vector<CandidatePath> candidates, const PlannerConfig& cfg) {
    if (candidates.empty()) throw std::invalid_argument("select_candidate: no candidates");
    std::vector<CandidatePath> unique;
    for (auto& c : candidates) {
        auto it = std::find_if(unique.begin(), unique.end(), [&](const CandidatePath& u) { return u.route == c.route; });
        if (it == unique.end())
            unique.push_back(std::move(c));
        else if (c.theta > it->theta)
            *it = std::move(c);
    }
    const auto scores = score_candidates(unique, cfg);
    std::size_t best = 0;
    for (std::size_t i = 1; i < unique.size(); ++i) {
        if (scores[i] > scores[best] || (scores[i] == scores[best] && unique[i].theta > unique[best].theta))
            best = i;
    }
    unique[best].score = scores[best];
    return unique[best];
}

AdaptOutcome plan_online_adapt(const Instance& inst, const MissionState& state, const PowerModel& model,
                               const PlannerConfig& cfg, std::span<const int> inherited, std::uint64_t seed) {
    const auto posts = posteriors_from_window(model.ng_priors, state.window);
    const int k = cfg.n_theta_candidates;
    AdaptOutcome out;
    std::optional<CandidatePath> fallback;
    for (int i = 0; i < k; ++i) {
        const double theta =
            k == 1 ? cfg.theta_max : cfg.theta_min + (cfg.theta_max - cfg.theta_min) * i / static_cast<double>(k - 1);
        RegimePowers powers;
        for (auto r : kAllRegimes) powers[r] = std::max(predictive_quantile(posts[r], theta), 1e-6);
        if (!(state.residual_energy() - inst.flight.energy_reserve > 0.0)) break;
        const CostGraph g = build_cost_graph(inst, state, powers);
        AcsParams p = cfg.acs;
        p.rng_seed = derive_seed(seed, {static_cast<std::uint64_t>(i)});
        try {
            PathSolution s = solve_iacs(g, p, path_from_route(g, inherited));
            CandidatePath c{theta, s, route_of(g, s), 0.0};
            out.candidates.push_back(std::move(c));
        } catch (const InfeasibleError&) {
            fallback = CandidatePath{theta, evaluate_path(g, {g.start(), g.end()}), {}, 0.0};
        }
    }
    if (!out.candidates.empty()) {
        out.chosen = select_candidate(out.candidates, cfg);
    } else if (fallback) {
        out.chosen = *fallback;
    } else {
        out.chosen.theta = cfg.theta_max;
    }
    return out;
}

// --- baselines ----------------------------------------------------------------------

PlanResult plan_romp(const Instance& inst, const MissionState& state, const PowerModel& model,
                     const AcsParams& acs, std::span<const int> inherited, std::uint64_t seed) {
    const RegimePowers powers = model.prior_means();
    try {
        return solve_on(build_cost_graph(inst, state, powers), acs, inherited, seed, powers);
    } catch (const MissionOverError&) {
        return mission_over(inst, state, powers);
    }
}

double weighted_error_ratio(const std::optional<LegEnergy>& last_leg, double w_act, double w_est) {
    if (!last_leg) return 1.0;
    if (!(last_leg->estimated > 0.0))
        throw std::invalid_argument("weighted_error_ratio: estimated leg energy must be positive");
    return w_act * ((last_leg->actual - last_leg->estimated) / last_leg->estimated + 1.0) + w_est;
}

PlanResult plan_weighted_err(const Instance& inst, const MissionState& state, const PowerModel& model,
                             const PlannerConfig& cfg, const std::optional<LegEnergy>& last_leg,
                             std::span<const int> inherited, std::uint64_t seed) {
    const double ratio = weighted_error_ratio(last_leg, cfg.w_act, cfg.w_est);
    RegimePowers powers = model.prior_means();
    try {
        const CostGraph g = build_cost_graph(inst, state, powers, ratio);
        for (auto r : kAllRegimes) powers[r] *= ratio;
        return solve_on(g, cfg.acs, inherited, seed, powers);
    } catch (const MissionOverError&) {
        return mission_over(inst, state, powers);
    }
}

std::size_t most_frequent_route(std::span<const RouteSample> samples) {
    if (samples.empty()) throw std::invalid_argument("most_frequent_route: no samples");
    std::vector<std::size_t> rep;    // first index of each distinct route
    std::vector<std::size_t> count;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::size_t k = 0;
        while (k < rep.size() && samples[rep[k]].route != samples[i].route) ++k;
        if (k == rep.size()) {
            rep.push_back(i);
            count.push_back(0);
        }
        ++count[k];
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < rep.size(); ++k) {
        const auto& a = samples[rep[k]];
        const auto& b = samples[rep[best]];
        if (count[k] != count[best]) {
            if (count[k] > count[best]) best = k;
        } else if (std::fabs(a.prize - b.prize) > 1e-9) {
            if (a.prize > b.prize) best = k;
        } else if (a.cost < b.cost) {
            best = k;
        }
    }
    return rep[best];
}

PlanResult plan_mcgreedy(const Instance& inst, const MissionState& state, const PowerModel& model,
                         const PlannerConfig& cfg, std::span<const int> inherited, std::uint64_t seed) {
    PerRegime<double> lo, hi;
    for (auto r : kAllRegimes) {
        const auto& rd = state.window.readings(r);
        if (rd.empty()) {
            lo[r] = hi[r] = model.priors[r].mean;
            continue;
        }
        lo[r] = hi[r] = rd.front().power;
        for (const auto& x : rd) {
            lo[r] = std::min(lo[r], x.power);
            hi[r] = std::max(hi[r], x.power);
        }
    }
    Rng rng(derive_seed(seed, {tag_of("mc")}));
    std::vector<RouteSample> samples;
    std::vector<PlanResult> plans;
    samples.reserve(static_cast<std::size_t>(cfg.mc_samples));
    plans.reserve(static_cast<std::size_t>(cfg.mc_samples));
    for (int s = 0; s < cfg.mc_samples; ++s) {
        RegimePowers powers;
        for (auto r : kAllRegimes) powers[r] = std::max(rng.uniform(lo[r], hi[r]), 1e-6);
        const std::uint64_t solver_seed =
            cfg.mc_shared_seed ? seed : derive_seed(seed, {tag_of("mc-solve"), static_cast<std::uint64_t>(s)});
        PlanResult p;
        try {
            p = solve_on(build_cost_graph(inst, state, powers), cfg.acs, inherited, solver_seed, powers);
        } catch (const MissionOverError&) {
            p = mission_over(inst, state, powers);
        }
        samples.push_back({p.route, p.planned_prize, p.planned_cost});
        plans.push_back(std::move(p));
    }
    return plans[most_frequent_route(samples)];
}

PlanResult replan(PlannerKind kind, const Instance& inst, const MissionState& state, const PowerModel& model,
                  const PlannerConfig& cfg, const std::optional<LegEnergy>& last_leg,
                  std::span<const int> inherited, std::uint64_t seed) {
    switch (kind) {
        case PlannerKind::offline: {
            // The static baseline keeps its route; only drop visited targets.
            PlanResult r;
            for (int id : inherited)
                if (state.is_unvisited(id)) r.route.push_back(id);
            r.powers = model.prior_means();
            return r;
        }
        case PlannerKind::romp: return plan_romp(inst, state, model, cfg.acs, inherited, seed);
        case PlannerKind::weighted_err:
            return plan_weighted_err(inst, state, model, cfg, last_leg, inherited, seed);
        case PlannerKind::mc_greedy: return plan_mcgreedy(inst, state, model, cfg, inherited, seed);
        case PlannerKind::adapt: {
            const AdaptOutcome o = plan_online_adapt(inst, state, model, cfg, inherited, seed);
            PlanResult r;
            r.route = o.chosen.route;
            r.planned_prize = o.chosen.solution.total_prize;
            r.planned_cost = o.chosen.solution.total_cost;
            r.theta = o.chosen.theta;
            const auto posts = posteriors_from_window(model.ng_priors, state.window);
            for (auto reg : kAllRegimes) r.powers[reg] = std::max(predictive_quantile(posts[reg], r.theta), 1e-6);
            return r;
        }
    }
    throw std::invalid_argument("replan: unknown planner");
}

}  // namespace adapt
