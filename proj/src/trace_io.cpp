#include <stdexcept>

#include "adapt/sim.hpp"
#include "json.hpp"

namespace adapt {

using nlohmann::json;

namespace {

json ng_to_json(const NormalGammaPosterior& p) { return json::array({p.mu, p.kappa, p.alpha, p.beta}); }

NormalGammaPosterior ng_from_json(const json& j) {
    return NormalGammaPosterior{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
                                j.at(3).get<double>()};
}

json per_regime_ng(const PerRegime<NormalGammaPosterior>& p) {
    json j = json::object();
    for (auto r : kAllRegimes) j[std::string(regime_name(r))] = ng_to_json(p[r]);
    return j;
}

PerRegime<NormalGammaPosterior> per_regime_ng(const json& j) {
    PerRegime<NormalGammaPosterior> p;
    for (auto r : kAllRegimes) p[r] = ng_from_json(j.at(std::string(regime_name(r))));
    return p;
}

}  // namespace

std::string trace_to_json(const MissionTrace& t, bool include_timing) {
    json j;
    j["format"] = kTraceFormat;
    j["instance"] = t.instance;
    j["planner"] = t.planner;
    j["seed"] = t.seed;
    j["delta_mu"] = t.delta_mu;
    j["delta_sigma"] = t.delta_sigma;
    j["execution"] = t.execution;
    j["battery_capacity"] = t.battery_capacity;
    j["energy_reserve"] = t.energy_reserve;
    j["window_length"] = t.window_length;
    j["ng_priors"] = per_regime_ng(t.ng_priors);
    j["offline"] = {{"route", t.offline_route},
                    {"planned_prize", t.offline_planned_prize},
                    {"planned_cost", t.offline_planned_cost}};

    json legs = json::array();
    for (const auto& l : t.legs) {
        json obs = json::array();
        for (const auto& o : l.observations)
            obs.push_back(json::array({std::string(regime_name(o.regime)), o.timestamp, o.power, o.duration}));
        legs.push_back({{"from", l.from},
                        {"to", l.to},
                        {"planned_energy", l.planned_energy},
                        {"actual_energy", l.actual_energy},
                        {"durations", l.durations.values},
                        {"completed", l.completed},
                        {"observations", std::move(obs)}});
    }
    j["legs"] = std::move(legs);

    json charges = json::array();
    for (const auto& c : t.charges)
        charges.push_back({{"node", c.node},
                           {"start_time", c.start_time},
                           {"prize", c.prize},
                           {"cost", c.cost},
                           {"duration", c.duration},
                           {"completed", c.completed}});
    j["charges"] = std::move(charges);

    std::string events;
    for (auto e : t.events) events.push_back(e == EventKind::leg ? 'L' : 'C');
    j["events"] = events;

    json replans = json::array();
    for (const auto& r : t.replans) {
        json jr = {{"at_node", r.at_node},
                   {"elapsed_time", r.elapsed_time},
                   {"residual", r.residual},
                   {"observations_seen", r.observations_seen},
                   {"posteriors", per_regime_ng(r.posteriors)},
                   {"theta", r.theta},
                   {"route", r.route},
                   {"planned_prize", r.planned_prize},
                   {"planned_cost", r.planned_cost}};
        if (include_timing) jr["wall_time"] = r.wall_time;
        replans.push_back(std::move(jr));
    }
    j["replans"] = std::move(replans);

    j["final_residual"] = t.final_residual;
    j["status"] = t.status == MissionStatus::success ? "success" : "failure";
    j["total_prize"] = t.total_prize;
    j["total_cost"] = t.total_cost;
    return j.dump();
}

MissionTrace trace_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("trace: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kTraceFormat)
            throw ParseError("trace: unsupported format '" + j.at("format").get<std::string>() + "'");
        MissionTrace t;
        t.instance = j.at("instance").get<std::string>();
        t.planner = j.at("planner").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.delta_mu = j.at("delta_mu").get<double>();
        t.delta_sigma = j.at("delta_sigma").get<double>();
        t.execution = j.at("execution").get<int>();
        t.battery_capacity = j.at("battery_capacity").get<double>();
        t.energy_reserve = j.at("energy_reserve").get<double>();
        t.window_length = j.at("window_length").get<double>();
        t.ng_priors = per_regime_ng(j.at("ng_priors"));
        const auto& off = j.at("offline");
        t.offline_route = off.at("route").get<std::vector<int>>();
        t.offline_planned_prize = off.at("planned_prize").get<double>();
        t.offline_planned_cost = off.at("planned_cost").get<double>();

        for (const auto& jl : j.at("legs")) {
            LegRecord l;
            l.from = jl.at("from").get<int>();
            l.to = jl.at("to").get<int>();
            l.planned_energy = jl.at("planned_energy").get<double>();
            l.actual_energy = jl.at("actual_energy").get<double>();
            l.durations.values = jl.at("durations").get<std::array<double, 3>>();
            l.completed = jl.at("completed").get<bool>();
            for (const auto& o : jl.at("observations"))
                l.observations.push_back(Observation{parse_regime(o.at(0).get<std::string>()), o.at(1).get<double>(),
                                                     o.at(2).get<double>(), o.at(3).get<double>()});
            t.legs.push_back(std::move(l));
        }
        for (const auto& jc : j.at("charges"))
            t.charges.push_back(ChargeRecord{jc.at("node").get<int>(), jc.at("start_time").get<double>(),
                                             jc.at("prize").get<double>(), jc.at("cost").get<double>(),
                                             jc.at("duration").get<double>(), jc.at("completed").get<bool>()});
        for (char c : j.at("events").get<std::string>()) {
            if (c != 'L' && c != 'C') throw ParseError("trace: bad event code");
            t.events.push_back(c == 'L' ? EventKind::leg : EventKind::charge);
        }
        for (const auto& jr : j.at("replans")) {
            ReplanRecord r;
            r.at_node = jr.at("at_node").get<int>();
            r.elapsed_time = jr.at("elapsed_time").get<double>();
            r.residual = jr.at("residual").get<double>();
            r.observations_seen = jr.at("observations_seen").get<std::size_t>();
            r.posteriors = per_regime_ng(jr.at("posteriors"));
            r.theta = jr.at("theta").get<double>();
            r.route = jr.at("route").get<std::vector<int>>();
            r.planned_prize = jr.at("planned_prize").get<double>();
            r.planned_cost = jr.at("planned_cost").get<double>();
            r.wall_time = jr.value("wall_time", 0.0);
            t.replans.push_back(std::move(r));
        }
        t.final_residual = j.at("final_residual").get<double>();
        const auto status = j.at("status").get<std::string>();
        if (status != "success" && status != "failure") throw ParseError("trace: bad status '" + status + "'");
        t.status = status == "success" ? MissionStatus::success : MissionStatus::failure;
        t.total_prize = j.at("total_prize").get<double>();
        t.total_cost = j.at("total_cost").get<double>();
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("trace: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("trace: ") + e.what());
    }
}

}  // namespace adapt
