#include "adapt/instance.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "adapt/rng.hpp"
#include "json.hpp"

namespace adapt {

using nlohmann::json;

double horizontal_distance(const Vec3& a, const Vec3& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::takeoff: return "takeoff";
        case Regime::cruise: return "cruise";
        case Regime::landing: return "landing";
    }
    return "?";
}

Regime parse_regime(std::string_view name) {
    for (auto r : kAllRegimes)
        if (regime_name(r) == name) return r;
    throw std::invalid_argument("unknown regime '" + std::string(name) + "'");
}

double ChargerModel::max_prize() const {
    return 0.5 * capacitance * (v_max * v_max - v_min * v_min) * 1e-3;
}

double node_prize(const NodeSpec& node, const ChargerModel& charger, double elapsed_t) {
    if (!(elapsed_t >= 0.0)) throw std::invalid_argument("node_prize: negative elapsed time");
    const double v0 = node.initial_voltage;
    const double base = 0.5 * charger.capacitance * (charger.v_max * charger.v_max - v0 * v0) * 1e-3;
    const double prize = base + charger.depletion_rate * elapsed_t;
    return std::min(prize, charger.max_prize());
}

double charge_cost(const NodeSpec& node, const ChargerModel& charger, double elapsed_t) {
    if (!(charger.eta_ipt > 0.0)) throw ModelError("charge_cost: IPT efficiency must be positive");
    return node_prize(node, charger, elapsed_t) / charger.eta_ipt;
}

double charge_time_for_prize(double prize_kj, const ChargerModel& charger) {
    if (prize_kj < 0.0) throw std::invalid_argument("charge_time: negative prize");
    if (!(charger.eta_cc > 0.0) || !(charger.avg_current > 0.0))
        throw ModelError("charge_time: CC efficiency and current must be positive");
    const double vmax2 = charger.v_max * charger.v_max;
    const double v2 = vmax2 - 2.0 * prize_kj * 1e3 / charger.capacitance;
    if (v2 < 0.0) throw ModelError("charge_time: prize exceeds capacitor capacity");
    const double v_current = std::sqrt(v2);
    return charger.capacitance * (charger.v_max - v_current) / charger.avg_current / charger.eta_cc;
}

double charge_time(const NodeSpec& node, const ChargerModel& charger, double elapsed_t) {
    return charge_time_for_prize(node_prize(node, charger, elapsed_t), charger);
}

LegDurations leg_durations(const Vec3& from, const Vec3& to, const FlightProfile& flight) {
    const double h = flight.cruise_altitude;
    return {(h - from.z) / flight.speed_takeoff, horizontal_distance(from, to) / flight.speed_cruise,
            (h - to.z) / flight.speed_landing};
}

double travel_cost(const Vec3& from, const Vec3& to, const FlightProfile& flight,
                   const RegimePowers& powers) {
    for (auto r : kAllRegimes)
        if (!(powers[r] > 0.0))
            throw std::invalid_argument("travel_cost: " + std::string(regime_name(r)) +
                                        " power must be positive");
    const auto d = leg_durations(from, to, flight);
    const double joules = powers[Regime::takeoff] * d.takeoff + powers[Regime::cruise] * d.cruise +
                          powers[Regime::landing] * d.landing;
    return joules * 1e-3;
}

void Instance::validate() const {
    auto fail = [](const std::string& msg) { throw ParseError("instance invalid: " + msg); };
    const auto& c = charger;
    if (!(c.capacitance > 0.0)) fail("charger.capacitance must be positive");
    if (!(c.v_min >= 0.0 && c.v_min < c.v_max)) fail("charger requires 0 <= v_min < v_max");
    if (!(c.eta_ipt > 0.0 && c.eta_ipt <= 1.0)) fail("charger.eta_ipt must lie in (0, 1]");
    if (!(c.eta_cc > 0.0 && c.eta_cc <= 1.0)) fail("charger.eta_cc must lie in (0, 1]");
    if (!(c.avg_current > 0.0)) fail("charger.avg_current must be positive");
    if (!(c.depletion_rate >= 0.0)) fail("charger.depletion_rate must be nonnegative");
    const auto& f = flight;
    if (!(f.speed_takeoff > 0.0 && f.speed_cruise > 0.0 && f.speed_landing > 0.0))
        fail("flight speeds must be positive");
    if (!(f.uav_mass > 0.0 && f.air_density > 0.0)) fail("flight mass and air density must be positive");
    if (!(f.energy_reserve >= 0.0 && f.battery_capacity > f.energy_reserve))
        fail("flight requires battery_capacity > energy_reserve >= 0");
    for (const auto* depot : {&start_depot, &end_depot})
        if (!(depot->z >= 0.0 && depot->z < f.cruise_altitude))
            fail("depot altitude must lie in [0, cruise_altitude)");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        const std::string tag = "node " + std::to_string(n.id);
        if (n.id != static_cast<int>(i) + 1)
            fail(tag + ": ids must be unique and contiguous from 1 (position " + std::to_string(i) + ")");
        if (!(n.initial_voltage >= c.v_min && n.initial_voltage <= c.v_max)) {
            std::ostringstream os;
            os << tag << ": initial_voltage " << n.initial_voltage << " outside [" << c.v_min << ", "
               << c.v_max << "]";
            fail(os.str());
        }
        if (!(n.position.z >= 0.0 && n.position.z < f.cruise_altitude))
            fail(tag + ": altitude must lie in [0, cruise_altitude)");
    }
}

Instance generate_instance(const GeneratorOptions& opts) {
    if (opts.n_nodes < 1) throw std::invalid_argument("generate_instance: need at least one node");
    if (!(opts.area_side > 0.0)) throw std::invalid_argument("generate_instance: area side must be positive");
    Rng rng(derive_seed(opts.seed, {tag_of("instance")}));
    Instance inst;
    inst.name = "gen" + std::to_string(opts.n_nodes) + "_s" + std::to_string(opts.seed);
    inst.start_depot = opts.start_depot;
    inst.end_depot = opts.end_depot;
    inst.charger = opts.charger;
    inst.flight = opts.flight;
    inst.nodes.reserve(static_cast<std::size_t>(opts.n_nodes));
    for (int i = 0; i < opts.n_nodes; ++i) {
        NodeSpec n;
        n.id = i + 1;
        n.position.x = rng.uniform(0.0, opts.area_side);
        n.position.y = rng.uniform(0.0, opts.area_side);
        n.position.z = 0.0;
        n.initial_voltage = rng.uniform(opts.charger.v_min, opts.charger.v_max);
        inst.nodes.push_back(n);
    }
    inst.validate();
    return inst;
}

// --- text format -----------------------------------------------------------

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing field '" + where + key + "'");
    return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_number()) throw ParseError("field '" + where + key + "' must be a number");
    return v.get<double>();
}

Vec3 vec_field(const json& obj, const char* key, const std::string& where) {
    const auto& v = field(obj, key, where);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw ParseError("field '" + where + key + "' must be [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

}  // namespace

std::string instance_to_text(const Instance& inst) {
    json j;
    j["format"] = kInstanceFormat;
    j["name"] = inst.name;
    j["start_depot"] = vec_to_json(inst.start_depot);
    j["end_depot"] = vec_to_json(inst.end_depot);
    const auto& c = inst.charger;
    j["charger"] = {{"capacitance", c.capacitance},   {"v_max", c.v_max},
                    {"v_min", c.v_min},               {"avg_current", c.avg_current},
                    {"eta_ipt", c.eta_ipt},           {"eta_cc", c.eta_cc},
                    {"depletion_rate", c.depletion_rate}};
    const auto& f = inst.flight;
    j["flight"] = {{"cruise_altitude", f.cruise_altitude}, {"speed_takeoff", f.speed_takeoff},
                   {"speed_cruise", f.speed_cruise},       {"speed_landing", f.speed_landing},
                   {"uav_mass", f.uav_mass},               {"air_density", f.air_density},
                   {"battery_capacity", f.battery_capacity}, {"energy_reserve", f.energy_reserve}};
    json nodes = json::array();
    for (const auto& n : inst.nodes)
        nodes.push_back({{"id", n.id}, {"position", vec_to_json(n.position)},
                         {"initial_voltage", n.initial_voltage}});
    j["nodes"] = std::move(nodes);
    return j.dump(2) + "\n";
}

Instance instance_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance file must hold an object");
    const auto& fmt = field(j, "format", "");
    if (!fmt.is_string() || fmt.get<std::string>() != kInstanceFormat)
        throw ParseError(std::string("unsupported instance format, expected '") + kInstanceFormat + "'");

    Instance inst;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) inst.name = it->get<std::string>();
    inst.start_depot = vec_field(j, "start_depot", "");
    inst.end_depot = vec_field(j, "end_depot", "");

    const auto& c = field(j, "charger", "");
    inst.charger.capacitance = number(c, "capacitance", "charger.");
    inst.charger.v_max = number(c, "v_max", "charger.");
    inst.charger.v_min = number(c, "v_min", "charger.");
    inst.charger.avg_current = number(c, "avg_current", "charger.");
    inst.charger.eta_ipt = number(c, "eta_ipt", "charger.");
    inst.charger.eta_cc = number(c, "eta_cc", "charger.");
    inst.charger.depletion_rate = number(c, "depletion_rate", "charger.");

    const auto& f = field(j, "flight", "");
    inst.flight.cruise_altitude = number(f, "cruise_altitude", "flight.");
    inst.flight.speed_takeoff = number(f, "speed_takeoff", "flight.");
    inst.flight.speed_cruise = number(f, "speed_cruise", "flight.");
    inst.flight.speed_landing = number(f, "speed_landing", "flight.");
    inst.flight.uav_mass = number(f, "uav_mass", "flight.");
    inst.flight.air_density = number(f, "air_density", "flight.");
    inst.flight.battery_capacity = number(f, "battery_capacity", "flight.");
    inst.flight.energy_reserve = number(f, "energy_reserve", "flight.");

    const auto& nodes = field(j, "nodes", "");
    if (!nodes.is_array()) throw ParseError("field 'nodes' must be an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "].";
        NodeSpec n;
        const auto& id = field(nodes[i], "id", where);
        if (!id.is_number_integer()) throw ParseError("field '" + where + "id' must be an integer");
        n.id = id.get<int>();
        n.position = vec_field(nodes[i], "position", where);
        n.initial_voltage = number(nodes[i], "initial_voltage", where);
        inst.nodes.push_back(n);
    }
    inst.validate();
    return inst;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << instance_to_text(inst);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return instance_from_text(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace adapt
