#include "doctest.h"

#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "adapt/planners.hpp"
#include "support/oracles.hpp"

using namespace adapt;
using doctest::Approx;

namespace {

Instance field(int n, std::uint64_t seed, double battery = 359.64, double side = 1000.0) {
    GeneratorOptions o;
    o.n_nodes = n;
    o.seed = seed;
    o.area_side = side;
    o.flight.battery_capacity = battery;
    return generate_instance(o);
}

MissionState start_of(const Instance& inst) { return MissionState::at_start(inst, ObservationWindow{}); }

std::vector<int> seq_of(const PathSolution& s) { return s.sequence; }

CandidatePath candidate(double theta, double prize, std::vector<int> route) {
    CandidatePath c;
    c.theta = theta;
    c.solution.total_prize = prize;
    c.route = std::move(route);
    return c;
}

// Observations at fixed powers in each regime, one per reading period.
void observe(MissionState& s, const RegimePowers& p, int per_regime) {
    for (int k = 0; k < per_regime; ++k)
        for (auto r : kAllRegimes) {
            s.elapsed_time += 20.0;
            s.window.push(r, s.elapsed_time, p[r]);
        }
}

}  // namespace

TEST_CASE("cost graph budget at mission start and after consumption") {
    const Instance inst = field(10, 3);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    const CostGraph g0 = build_cost_graph(inst, s, model.prior_means());
    CHECK(g0.budget == Approx(359.64).epsilon(1e-12));
    CHECK(g0.n == 12);
    CHECK(g0.labels.front() == 0);
    CHECK(g0.labels.back() == inst.end_depot_id());
    for (int v = 1; v <= 10; ++v) {
        CHECK(g0.labels[v] == v);
        CHECK(g0.prize[v] == node_prize(inst.node(v), inst.charger, 0.0));
        CHECK(g0.service_cost[v] == charge_cost(inst.node(v), inst.charger, 0.0));
    }

    s.consumed = 100.0;
    CHECK(build_cost_graph(inst, s, model.prior_means()).budget == Approx(259.64).epsilon(1e-12));

    s.consumed = 359.64;
    CHECK_THROWS_AS(build_cost_graph(inst, s, model.prior_means()), MissionOverError);
}

TEST_CASE("cost graph uses the current position, time and unvisited set") {
    const Instance inst = field(6, 5);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    s.position = inst.node(2).position;
    s.current_node = 2;
    s.mark_visited(2);
    s.elapsed_time = 5000.0;
    const CostGraph g = build_cost_graph(inst, s, model.prior_means());
    REQUIRE(g.n == 7);
    CHECK(g.labels[0] == 2);
    CHECK(g.labels[1] == 1);
    CHECK(g.labels[2] == 3);
    CHECK(g.prize[1] == node_prize(inst.node(1), inst.charger, 5000.0));
    CHECK(g.edge(0, 1) == travel_cost(inst.node(2).position, inst.node(1).position, inst.flight, model.prior_means()));
    CHECK(g.edge(0, 6) == travel_cost(inst.node(2).position, inst.end_depot, inst.flight, model.prior_means()));
}

TEST_CASE("edge costs are monotone in the safety belief") {
    const Instance inst = field(12, 7);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    observe(s, {{600.0, 520.0, 470.0}}, 10);
    const auto post = posteriors_from_window(model.ng_priors, s.window);
    auto at = [&](double theta) {
        RegimePowers p;
        for (auto r : kAllRegimes) p[r] = predictive_quantile(post[r], theta);
        return build_cost_graph(inst, s, p);
    };
    const CostGraph lo = at(0.75);
    const CostGraph hi = at(0.999);
    for (int i = 0; i < lo.n; ++i)
        for (int j = 0; j < lo.n; ++j)
            if (i != j) CHECK(hi.edge(i, j) >= lo.edge(i, j));
}

TEST_CASE("offline plan on a 20-node field is feasible") {
    const Instance inst = field(20, 11);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    const PlanResult p = plan_offline(inst, model, AcsParams{});
    const CostGraph g = build_cost_graph(inst, start_of(inst), model.prior_means());
    const PathSolution s = path_from_route(g, p.route);
    const auto chk = oracle::check_path(g, seq_of(s));
    CHECK_MESSAGE(chk.ok, chk.why);
    CHECK(chk.cost <= 359.64 + 1e-9);
    CHECK(chk.prize == Approx(p.planned_prize).epsilon(1e-12));
    CHECK(chk.cost == Approx(p.planned_cost).epsilon(1e-12));
    CHECK(p.route.size() == std::set<int>(p.route.begin(), p.route.end()).size());
}

TEST_CASE("offline plan on 8 nodes is within 2% of the exact optimum") {
    const Instance inst = field(8, 21, 359.64, 3000.0);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    const CostGraph g = build_cost_graph(inst, start_of(inst), model.prior_means());
    const PathSolution opt = exact_solve(g);
    const auto brute = oracle::brute_force(g);
    REQUIRE(opt.total_prize == Approx(brute.prize).epsilon(1e-9));
    REQUIRE(opt.interior_size() < 8);  // budget binds

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        AcsParams acs;
        acs.rng_seed = seed;
        const PlanResult p = plan_offline(inst, model, acs);
        CAPTURE(seed);
        CHECK(p.planned_prize >= 0.98 * opt.total_prize);
        CHECK(p.planned_prize <= opt.total_prize + 1e-9);
    }
}

TEST_CASE("offline plan of an empty field is the direct hop") {
    Instance inst;
    inst.name = "empty";
    inst.end_depot = {100.0, 0.0, 0.0};
    const PowerModel model = PowerModel::from_flight(inst.flight);
    const PlanResult p = plan_offline(inst, model, AcsParams{});
    CHECK(p.route.empty());
    CHECK(p.planned_prize == 0.0);
    CHECK(p.planned_cost == Approx(travel_cost(inst.start_depot, inst.end_depot, inst.flight, model.prior_means())));
}

TEST_CASE("candidate scoring by hand") {
    PlannerConfig cfg;
    const std::vector<CandidatePath> c{candidate(0.80, 40.0, {1}), candidate(0.999, 39.0, {2})};
    const auto s = score_candidates(c, cfg);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == Approx(0.5 * 0.05 / 0.249 + 0.5).epsilon(1e-12));
    CHECK(s[0] == Approx(0.6004).epsilon(1e-4));
    CHECK(s[1] == Approx(0.5).epsilon(1e-12));
    const CandidatePath best = select_candidate(c, cfg);
    CHECK(best.theta == 0.80);
    CHECK(best.route == std::vector<int>{1});
    CHECK(best.score == Approx(s[0]));
}

TEST_CASE("degenerate prize range contributes nothing") {
    PlannerConfig cfg;
    const std::vector<CandidatePath> c{candidate(0.75, 30.0, {1}), candidate(0.999, 30.0, {2})};
    const auto s = score_candidates(c, cfg);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == Approx(0.5));
}

TEST_CASE("identical routes collapse to the highest theta") {
    PlannerConfig cfg;
    const std::vector<CandidatePath> dup{candidate(0.80, 40.0, {1, 2}), candidate(0.90, 40.0, {1, 2}),
                                         candidate(0.999, 35.0, {3})};
    const std::vector<CandidatePath> unique{candidate(0.90, 40.0, {1, 2}), candidate(0.999, 35.0, {3})};
    const CandidatePath a = select_candidate(dup, cfg);
    const CandidatePath b = select_candidate(unique, cfg);
    CHECK(a.theta == 0.90);
    CHECK(a.route == b.route);
    CHECK(a.score == b.score);
}

TEST_CASE("score ties go to the higher theta") {
    PlannerConfig cfg;
    cfg.w_theta = 0.0;
    cfg.w_prize = 1.0;
    const std::vector<CandidatePath> c{candidate(0.80, 40.0, {1}), candidate(0.95, 40.0, {2}),
                                       candidate(0.90, 40.0, {3})};
    CHECK(select_candidate(c, cfg).theta == 0.95);
}

TEST_CASE("argmax is invariant under affine prize rescaling") {
    PlannerConfig cfg;
    Rng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform(0.0, 5.0));
        std::vector<CandidatePath> c;
        for (int i = 0; i < k; ++i)
            c.push_back(candidate(rng.uniform(cfg.theta_min, cfg.theta_max), rng.uniform(0.0, 60.0), {i}));
        const double a = rng.uniform(0.1, 10.0);
        const double b = rng.uniform(-50.0, 50.0);
        auto scaled = c;
        for (auto& x : scaled) x.solution.total_prize = a * x.solution.total_prize + b;
        CHECK(select_candidate(c, cfg).route == select_candidate(scaled, cfg).route);
    }
}

TEST_CASE("ADAPT chooses a feasible path and includes a lone affordable node") {
    const Instance inst = field(15, 31);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    PlannerConfig cfg;
    MissionState s = start_of(inst);
    observe(s, {{650.0, 560.0, 520.0}}, 15);
    s.consumed = 180.0;
    const AdaptOutcome out = plan_online_adapt(inst, s, model, cfg, {}, 5);
    REQUIRE(!out.candidates.empty());
    CHECK(out.candidates.size() <= 5);
    const double budget = s.residual_energy() - inst.flight.energy_reserve;
    for (const auto& c : out.candidates) {
        CHECK(c.solution.feasible);
        CHECK(c.solution.total_cost <= budget + 1e-9);
    }
    CHECK(out.chosen.solution.total_cost <= budget + 1e-9);
    CHECK(out.chosen.theta >= cfg.theta_min);
    CHECK(out.chosen.theta <= cfg.theta_max);

    MissionState lone = start_of(inst);
    lone.unvisited = {7};
    const AdaptOutcome one = plan_online_adapt(inst, lone, model, cfg, {}, 5);
    CHECK(one.chosen.route == std::vector<int>{7});
}

TEST_CASE("ADAPT with no affordable path returns directly") {
    const Instance inst = field(10, 41);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    s.position = {1000.0, 1000.0, 0.0};
    s.current_node = 4;
    s.mark_visited(4);
    s.consumed = inst.flight.battery_capacity - 1.0;
    const AdaptOutcome out = plan_online_adapt(inst, s, model, PlannerConfig{}, {}, 1);
    CHECK(out.candidates.empty());
    CHECK(out.chosen.route.empty());
    CHECK(out.chosen.solution.total_prize == 0.0);

    s.consumed = inst.flight.battery_capacity;
    const PlanResult r = replan(PlannerKind::adapt, inst, s, model, PlannerConfig{}, std::nullopt, {}, 1);
    CHECK(r.route.empty());
    CHECK(r.planned_prize == 0.0);
}

TEST_CASE("ADAPT never loses an inherited path that is still feasible") {
    const PowerModel model = PowerModel::from_flight(FlightProfile{});
    PlannerConfig cfg;
    for (std::uint64_t k = 0; k < 4; ++k) {
        const Instance inst = field(18, 100 + k);
        const MissionState s = start_of(inst);
        const auto post = posteriors_from_window(model.ng_priors, s.window);
        RegimePowers top;
        for (auto r : kAllRegimes) top[r] = predictive_quantile(post[r], cfg.theta_max);
        const CostGraph g = build_cost_graph(inst, s, top);
        AcsParams quick;
        quick.n_ants = 5;
        quick.n_iterations = 5;
        quick.rng_seed = k;
        const PathSolution prev = solve_iacs(g, quick);
        const std::vector<int> inherited = route_of(g, prev);
        const AdaptOutcome out = plan_online_adapt(inst, s, model, cfg, inherited, 77 + k);
        REQUIRE(out.candidates.size() == 5);
        for (const auto& c : out.candidates) CHECK(c.solution.total_prize >= prev.total_prize - 1e-9);
        CHECK(out.chosen.solution.total_prize >= prev.total_prize - 1e-9);
    }
}

TEST_CASE("ROMP first re-plan sees the offline graph") {
    const Instance inst = field(12, 51);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    const MissionState s = start_of(inst);
    const CostGraph g = build_cost_graph(inst, s, model.prior_means());
    const PlanResult off = plan_offline(inst, model, AcsParams{});
    const PlanResult romp = plan_romp(inst, s, model, AcsParams{}, off.route, 3);
    const PathSolution replayed = path_from_route(g, romp.route);
    CHECK(replayed.total_prize == Approx(romp.planned_prize).epsilon(1e-12));
    CHECK(replayed.total_cost == Approx(romp.planned_cost).epsilon(1e-12));
    CHECK(romp.planned_prize >= off.planned_prize - 1e-9);
    CHECK(romp.powers == model.prior_means());
}

TEST_CASE("no unvisited nodes means a direct return for every online planner") {
    const Instance inst = field(5, 61);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    s.position = inst.node(3).position;
    s.current_node = 3;
    s.unvisited.clear();
    s.consumed = 50.0;
    observe(s, {{580.0, 500.0, 480.0}}, 2);
    const double direct = travel_cost(s.position, inst.end_depot, inst.flight, model.prior_means());
    for (auto k : {PlannerKind::romp, PlannerKind::weighted_err, PlannerKind::mc_greedy, PlannerKind::adapt}) {
        PlannerConfig cfg;
        cfg.mc_samples = 3;
        const PlanResult r = replan(k, inst, s, model, cfg, LegEnergy{10.0, 10.0}, {}, 9);
        CAPTURE(planner_name(k));
        CHECK(r.route.empty());
        CHECK(r.planned_prize == 0.0);
        if (k == PlannerKind::romp || k == PlannerKind::weighted_err) CHECK(r.planned_cost == Approx(direct));
    }
}

TEST_CASE("weighted error ratio") {
    CHECK(weighted_error_ratio(LegEnergy{10.0, 12.0}, 0.5, 0.5) == Approx(1.1).epsilon(1e-12));
    CHECK(weighted_error_ratio(LegEnergy{10.0, 8.0}, 0.5, 0.5) == Approx(0.9).epsilon(1e-12));
    CHECK(weighted_error_ratio(LegEnergy{10.0, 10.0}, 0.5, 0.5) == 1.0);
    CHECK(weighted_error_ratio(std::nullopt, 0.5, 0.5) == 1.0);
    CHECK(weighted_error_ratio(LegEnergy{10.0, 15.0}, 1.0, 0.0) == Approx(1.5));
    CHECK_THROWS_AS(weighted_error_ratio(LegEnergy{0.0, 1.0}, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("WeightedErr with an exact estimate is ROMP; otherwise edges scale") {
    const Instance inst = field(14, 71);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    s.position = inst.node(1).position;
    s.current_node = 1;
    s.mark_visited(1);
    s.consumed = 40.0;
    PlannerConfig cfg;
    const PlanResult romp = plan_romp(inst, s, model, cfg.acs, {}, 13);
    const PlanResult same = plan_weighted_err(inst, s, model, cfg, LegEnergy{20.0, 20.0}, {}, 13);
    CHECK(same.route == romp.route);
    CHECK(same.planned_cost == romp.planned_cost);
    const PlanResult first = plan_weighted_err(inst, s, model, cfg, std::nullopt, {}, 13);
    CHECK(first.route == romp.route);

    const PlanResult hot = plan_weighted_err(inst, s, model, cfg, LegEnergy{20.0, 30.0}, {}, 13);
    for (auto r : kAllRegimes) CHECK(hot.powers[r] == Approx(1.25 * model.prior_means()[r]));
    const CostGraph g = build_cost_graph(inst, s, model.prior_means(), 1.25);
    CHECK(path_from_route(g, hot.route).total_cost == Approx(hot.planned_cost).epsilon(1e-12));
    CHECK(hot.planned_cost <= g.budget + 1e-9);
}

TEST_CASE("most frequent route counting") {
    std::vector<RouteSample> s;
    for (int i = 0; i < 30; ++i) s.push_back({{2, 1}, 50.0, 10.0});
    for (int i = 0; i < 60; ++i) s.push_back({{1, 2}, 40.0, 10.0});
    for (int i = 0; i < 10; ++i) s.push_back({{3}, 60.0, 5.0});
    const std::size_t k = most_frequent_route(s);
    CHECK(s[k].route == std::vector<int>{1, 2});
    CHECK(k == 30);

    std::vector<RouteSample> tie;
    for (int i = 0; i < 50; ++i) tie.push_back({{1}, 10.0, 3.0});
    for (int i = 0; i < 50; ++i) tie.push_back({{2}, 12.0, 9.0});
    CHECK(tie[most_frequent_route(tie)].route == std::vector<int>{2});

    std::vector<RouteSample> cost_tie{{{1}, 10.0, 3.0}, {{2}, 10.0, 2.0}};
    CHECK(cost_tie[most_frequent_route(cost_tie)].route == std::vector<int>{2});
    CHECK_THROWS_AS(most_frequent_route(std::vector<RouteSample>{}), std::invalid_argument);
}

TEST_CASE("MCGreedy with a degenerate range and a shared seed is a single solve") {
    const Instance inst = field(12, 81);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    observe(s, model.prior_means(), 6);
    PlannerConfig cfg;
    cfg.mc_shared_seed = true;
    const PlanResult mc = plan_mcgreedy(inst, s, model, cfg, {}, 17);
    const PlanResult romp = plan_romp(inst, s, model, cfg.acs, {}, 17);
    CHECK(mc.route == romp.route);
    CHECK(mc.planned_prize == romp.planned_prize);
    CHECK(mc.powers == model.prior_means());
}

TEST_CASE("MCGreedy samples powers within the observed range") {
    const Instance inst = field(10, 83);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    observe(s, {{560.0, 480.0, 450.0}}, 3);
    observe(s, {{640.0, 540.0, 520.0}}, 3);
    PlannerConfig cfg;
    cfg.mc_samples = 20;
    const PlanResult mc = plan_mcgreedy(inst, s, model, cfg, {}, 19);
    CHECK(mc.powers[Regime::takeoff] >= 560.0);
    CHECK(mc.powers[Regime::takeoff] <= 640.0);
    CHECK(mc.powers[Regime::cruise] >= 480.0);
    CHECK(mc.powers[Regime::cruise] <= 540.0);
    CHECK(mc.powers[Regime::landing] >= 450.0);
    CHECK(mc.powers[Regime::landing] <= 520.0);
}

TEST_CASE("planners are deterministic given state and seed") {
    const Instance inst = field(16, 91);
    const PowerModel model = PowerModel::from_flight(inst.flight);
    MissionState s = start_of(inst);
    observe(s, {{600.0, 520.0, 490.0}}, 5);
    s.consumed = 60.0;
    PlannerConfig cfg;
    cfg.mc_samples = 10;
    const std::vector<int> inherited{3, 5};
    for (auto k : {PlannerKind::romp, PlannerKind::weighted_err, PlannerKind::mc_greedy, PlannerKind::adapt}) {
        const PlanResult a = replan(k, inst, s, model, cfg, LegEnergy{10.0, 11.0}, inherited, 1234);
        const PlanResult b = replan(k, inst, s, model, cfg, LegEnergy{10.0, 11.0}, inherited, 1234);
        CAPTURE(planner_name(k));
        CHECK(a.route == b.route);
        CHECK(a.planned_prize == b.planned_prize);
        CHECK(a.planned_cost == b.planned_cost);
        CHECK(a.theta == b.theta);
    }
}

TEST_CASE("planner config validation and names") {
    PlannerConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.theta_min = 0.999;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.w_theta = 0.7;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.w_act = 0.2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.n_theta_candidates = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    for (auto k : {PlannerKind::offline, PlannerKind::romp, PlannerKind::weighted_err, PlannerKind::mc_greedy,
                   PlannerKind::adapt})
        CHECK(parse_planner(planner_name(k)) == k);
    CHECK(parse_planner("adapt") == PlannerKind::adapt);
    CHECK_THROWS_AS(parse_planner("greedy"), ConfigError);
}
