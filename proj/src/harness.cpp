#include "adapt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace adapt {

using nlohmann::json;

// --- config -------------------------------------------------------------------

void ExperimentConfig::validate() const {
    if (instances.empty()) throw ConfigError("experiment: no instances");
    if (planners.empty()) throw ConfigError("experiment: no planners");
    if (delta_mu_grid.empty() || delta_sigma_grid.empty()) throw ConfigError("experiment: empty delta grid");
    for (double s : delta_sigma_grid)
        if (!(1.0 + s >= 0.0)) throw ConfigError("experiment: delta_sigma must be >= -1");
    for (double m : delta_mu_grid)
        if (!(1.0 + m > 0.0)) throw ConfigError("experiment: delta_mu must be > -1");
    if (n_executions < 1) throw ConfigError("experiment: n_executions must be >= 1");
    if (workers < 1) throw ConfigError("experiment: workers must be >= 1");
    if (!(sim.reading_period > 0.0) || !(sim.window_length > 0.0))
        throw ConfigError("experiment: reading_period and window_length must be positive");
    if (energy_reserve && !(*energy_reserve >= 0.0)) throw ConfigError("experiment: energy_reserve must be >= 0");
    for (const auto& s : instances)
        if (s.file.has_value() == s.generator.has_value())
            throw ConfigError("experiment: each instance needs exactly one of 'file' or 'generate'");
    planner.validate();
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

Vec3 vec3_of(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected [x, y, z]");
    return Vec3{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

AcsParams parse_acs(const json& j) {
    reject_unknown(j, {"n_ants", "n_iterations", "beta", "rho_local", "alpha_global", "q0", "epsilon",
                       "max_no_improve"},
                   "planner.acs");
    AcsParams a;
    read_opt(j, "n_ants", a.n_ants);
    read_opt(j, "n_iterations", a.n_iterations);
    read_opt(j, "beta", a.beta_heuristic);
    read_opt(j, "rho_local", a.rho_local);
    read_opt(j, "alpha_global", a.alpha_global);
    read_opt(j, "q0", a.q0);
    read_opt(j, "epsilon", a.epsilon);
    read_opt(j, "max_no_improve", a.max_no_improve);
    return a;
}

PlannerConfig parse_planner_config(const json& j) {
    reject_unknown(j, {"theta_min", "theta_max", "n_theta", "w_theta", "w_prize", "mc_samples", "mc_shared_seed",
                       "w_act", "w_est", "acs", "ng"},
                   "planner");
    PlannerConfig c;
    read_opt(j, "theta_min", c.theta_min);
    read_opt(j, "theta_max", c.theta_max);
    read_opt(j, "n_theta", c.n_theta_candidates);
    read_opt(j, "w_theta", c.w_theta);
    read_opt(j, "w_prize", c.w_prize);
    read_opt(j, "mc_samples", c.mc_samples);
    read_opt(j, "mc_shared_seed", c.mc_shared_seed);
    read_opt(j, "w_act", c.w_act);
    read_opt(j, "w_est", c.w_est);
    if (j.contains("acs")) c.acs = parse_acs(j.at("acs"));
    if (j.contains("ng")) {
        const auto& n = j.at("ng");
        reject_unknown(n, {"mu", "kappa", "alpha", "beta"}, "planner.ng");
        for (const char* k : {"mu", "kappa", "alpha", "beta"}) {
            if (!n.contains(k)) continue;
            const double v = n.at(k).get<double>();
            if (std::string(k) == "mu") c.ng.mu = v;
            if (std::string(k) == "kappa") c.ng.kappa = v;
            if (std::string(k) == "alpha") c.ng.alpha = v;
            if (std::string(k) == "beta") c.ng.beta = v;
        }
    }
    return c;
}

InstanceSource parse_source(const json& j, const std::filesystem::path& base) {
    reject_unknown(j, {"file", "generate"}, "instances[]");
    InstanceSource s;
    if (j.contains("file")) {
        std::filesystem::path p = j.at("file").get<std::string>();
        s.file = p.is_absolute() || base.empty() ? p : base / p;
    }
    if (j.contains("generate")) {
        const auto& g = j.at("generate");
        reject_unknown(g, {"n_nodes", "area_side", "seed", "start_depot", "end_depot"}, "generate");
        GeneratorOptions o;
        read_opt(g, "n_nodes", o.n_nodes);
        read_opt(g, "area_side", o.area_side);
        read_opt(g, "seed", o.seed);
        if (g.contains("start_depot")) o.start_depot = vec3_of(g.at("start_depot"));
        if (g.contains("end_depot")) o.end_depot = vec3_of(g.at("end_depot"));
        s.generator = o;
    }
    return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        reject_unknown(j, {"instances", "planners", "delta_mu_grid", "delta_sigma_grid", "n_executions", "root_seed",
                           "planner", "reading_period", "window_length", "energy_reserve", "output_dir",
                           "write_traces", "workers"},
                       "config");
        if (!j.contains("instances")) throw ConfigError("config: missing 'instances'");
        for (const auto& s : j.at("instances")) c.instances.push_back(parse_source(s, base_dir));
        if (j.contains("planners")) {
            c.planners.clear();
            for (const auto& p : j.at("planners")) c.planners.push_back(parse_planner(p.get<std::string>()));
        }
        read_opt(j, "delta_mu_grid", c.delta_mu_grid);
        read_opt(j, "delta_sigma_grid", c.delta_sigma_grid);
        read_opt(j, "n_executions", c.n_executions);
        read_opt(j, "root_seed", c.root_seed);
        if (j.contains("planner")) c.planner = parse_planner_config(j.at("planner"));
        read_opt(j, "reading_period", c.sim.reading_period);
        read_opt(j, "window_length", c.sim.window_length);
        if (j.contains("energy_reserve")) c.energy_reserve = j.at("energy_reserve").get<double>();
        if (j.contains("output_dir")) {
            std::filesystem::path p = j.at("output_dir").get<std::string>();
            c.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
        }
        read_opt(j, "write_traces", c.write_traces);
        read_opt(j, "workers", c.workers);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_experiment_config(ss.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::vector<Instance> load_instances(const ExperimentConfig& cfg) {
    std::vector<Instance> out;
    std::set<std::string> names;
    for (const auto& s : cfg.instances) {
        Instance inst = s.file ? load_instance(*s.file) : generate_instance(*s.generator);
        if (cfg.energy_reserve) inst.flight.energy_reserve = *cfg.energy_reserve;
        if (!names.insert(inst.name).second) throw ConfigError("experiment: duplicate instance name '" + inst.name + "'");
        out.push_back(std::move(inst));
    }
    return out;
}

// --- metrics --------------------------------------------------------------------

namespace {

bool same_cell(const MissionTrace& a, const MissionTrace& b) {
    return a.instance == b.instance && a.planner == b.planner && a.delta_mu == b.delta_mu &&
           a.delta_sigma == b.delta_sigma;
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {m, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : "N/A"; }

}  // namespace

MetricsRecord compute_metrics(std::span<const MissionTrace> traces) {
    if (traces.empty()) throw std::invalid_argument("compute_metrics: no traces");
    MetricsRecord m;
    const auto& first = traces.front();
    m.instance = first.instance;
    m.planner = first.planner;
    m.delta_mu = first.delta_mu;
    m.delta_sigma = first.delta_sigma;
    std::vector<double> prizes;
    std::vector<double> costs;
    double wall = 0.0;
    for (const auto& t : traces) {
        if (!same_cell(t, first)) throw std::invalid_argument("compute_metrics: traces span several cells");
        ++m.executions;
        if (t.status == MissionStatus::success) {
            ++m.successes;
            prizes.push_back(t.total_prize);
            costs.push_back(t.total_cost);
        }
        for (const auto& r : t.replans) {
            wall += r.wall_time;
            m.max_replan_time = std::max(m.max_replan_time, r.wall_time);
            ++m.replans;
        }
    }
    m.msr = static_cast<double>(m.successes) / static_cast<double>(m.executions);
    if (!prizes.empty()) {
        std::tie(m.mean_prize, m.sd_prize) = mean_sd(prizes);
        std::tie(m.mean_cost, m.sd_cost) = mean_sd(costs);
    }
    if (m.replans > 0) m.mean_replan_time = wall / m.replans;
    return m;
}

std::vector<MetricsRecord> metrics_by_cell(std::span<const MissionTrace> traces) {
    std::vector<MetricsRecord> out;
    std::size_t i = 0;
    while (i < traces.size()) {
        std::size_t j = i + 1;
        while (j < traces.size() && same_cell(traces[j], traces[i])) ++j;
        out.push_back(compute_metrics(traces.subspan(i, j - i)));
        i = j;
    }
    return out;
}

std::string metrics_csv(std::span<const MetricsRecord> rows) {
    std::ostringstream os;
    os << "# " << kMetricsSchema << "\n";
    os << "instance,planner,delta_mu,delta_sigma,executions,successes,msr,mean_prize,sd_prize,mean_cost,sd_cost\n";
    for (const auto& r : rows)
        os << r.instance << ',' << r.planner << ',' << num(r.delta_mu) << ',' << num(r.delta_sigma) << ','
           << r.executions << ',' << r.successes << ',' << num(r.msr) << ',' << num(r.mean_prize) << ','
           << num(r.sd_prize) << ',' << num(r.mean_cost) << ',' << num(r.sd_cost) << '\n';
    return os.str();
}

std::string timing_csv(std::span<const MetricsRecord> rows) {
    std::ostringstream os;
    os << "instance,planner,delta_mu,delta_sigma,replans,mean_replan_s,max_replan_s\n";
    for (const auto& r : rows)
        os << r.instance << ',' << r.planner << ',' << num(r.delta_mu) << ',' << num(r.delta_sigma) << ','
           << r.replans << ',' << num(r.mean_replan_time) << ',' << num(r.max_replan_time) << '\n';
    return os.str();
}

// --- execution ------------------------------------------------------------------

namespace {

std::uint64_t fraction_tag(double x) { return tag_of(num(x)); }

/// Run fn(i) for i in [0, n) on `workers` threads; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    const auto k = static_cast<std::size_t>(std::max(1, workers));
    if (k == 1 || n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < std::min(k, n); ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentSeeds experiment_seeds(std::uint64_t root, const std::string& instance, double delta_mu,
                                 double delta_sigma, int execution) {
    const std::uint64_t inst = derive_seed(root, {tag_of(instance)});
    const auto exec = static_cast<std::uint64_t>(execution);
    ExperimentSeeds s;
    s.offline = derive_seed(inst, {tag_of("offline"), exec});
    const std::uint64_t cell = derive_seed(inst, {fraction_tag(delta_mu), fraction_tag(delta_sigma)});
    const std::uint64_t run = derive_seed(cell, {exec});
    s.mission.truth = derive_seed(run, {tag_of("truth")});
    s.mission.solver = derive_seed(run, {tag_of("solver")});
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    ExperimentResult res;
    res.instances = load_instances(cfg);
    const std::size_t n_inst = res.instances.size();
    const auto n_exec = static_cast<std::size_t>(cfg.n_executions);

    std::vector<PowerModel> models;
    for (const auto& inst : res.instances) models.push_back(PowerModel::from_flight(inst.flight, cfg.planner.ng));

    const std::size_t n_offline = n_inst * n_exec;
    const std::size_t n_missions =
        n_inst * cfg.planners.size() * cfg.delta_mu_grid.size() * cfg.delta_sigma_grid.size() * n_exec;
    const std::size_t total = n_offline + n_missions;
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    auto tick = [&] {
        const std::size_t d = ++done;
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(d, total);
        }
    };

    std::vector<PlanResult> offline(n_offline);
    parallel_for(n_offline, cfg.workers, [&](std::size_t k) {
        const std::size_t i = k / n_exec;
        const int e = static_cast<int>(k % n_exec);
        AcsParams acs = cfg.planner.acs;
        acs.rng_seed = experiment_seeds(cfg.root_seed, res.instances[i].name, 0.0, 0.0, e).offline;
        offline[k] = plan_offline(res.instances[i], models[i], acs);
        tick();
    });

    struct Task {
        std::size_t instance;
        PlannerKind planner;
        double dmu;
        double dsig;
        int execution;
    };
    std::vector<Task> tasks;
    tasks.reserve(n_missions);
    for (std::size_t i = 0; i < n_inst; ++i)
        for (auto p : cfg.planners)
            for (double dmu : cfg.delta_mu_grid)
                for (double dsig : cfg.delta_sigma_grid)
                    for (int e = 0; e < cfg.n_executions; ++e) tasks.push_back({i, p, dmu, dsig, e});

    res.traces.resize(tasks.size());
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t k) {
        const Task& t = tasks[k];
        const Instance& inst = res.instances[t.instance];
        const auto seeds = experiment_seeds(cfg.root_seed, inst.name, t.dmu, t.dsig, t.execution);
        const TruthModel truth = make_truth(models[t.instance].priors, t.dmu, t.dsig);
        MissionSpec spec{t.planner, cfg.planner, cfg.sim};
        MissionTrace tr = run_mission(inst, models[t.instance], spec, truth, seeds.mission,
                                      offline[t.instance * n_exec + static_cast<std::size_t>(t.execution)]);
        tr.execution = t.execution;
        res.traces[k] = std::move(tr);
        tick();
    });
    res.metrics = metrics_by_cell(res.traces);
    return res;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "metrics.csv", metrics_csv(result.metrics));
    write_text(dir / "timing.csv", timing_csv(result.metrics));
    if (!cfg.write_traces) return;
    const auto path = dir / "traces.jsonl";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    for (const auto& t : result.traces) out << trace_to_json(t) << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<SweepBlock> theta_sensitivity_sweep(const ExperimentConfig& cfg, std::span<const double> theta_grid,
                                                const ProgressFn& progress) {
    if (std::find(cfg.planners.begin(), cfg.planners.end(), PlannerKind::adapt) == cfg.planners.end())
        throw ConfigError("sweep-theta: ADAPT must be in the planner list");
    if (theta_grid.empty()) throw ConfigError("sweep-theta: empty theta_min grid");
    std::vector<SweepBlock> out;
    for (double th : theta_grid) {
        ExperimentConfig c = cfg;
        c.planners = {PlannerKind::adapt};
        c.planner.theta_min = th;
        c.validate();
        out.push_back({th, run_experiment(c, progress)});
    }
    return out;
}

std::string sweep_csv(std::span<const SweepBlock> blocks) {
    std::ostringstream os;
    os << "# " << kMetricsSchema << "\n";
    os << "theta_min,instance,planner,delta_mu,delta_sigma,executions,successes,msr,mean_prize,sd_prize,mean_cost,"
          "sd_cost\n";
    for (const auto& b : blocks)
        for (const auto& r : b.result.metrics)
            os << num(b.theta_min) << ',' << r.instance << ',' << r.planner << ',' << num(r.delta_mu) << ','
               << num(r.delta_sigma) << ',' << r.executions << ',' << r.successes << ',' << num(r.msr) << ','
               << num(r.mean_prize) << ',' << num(r.sd_prize) << ',' << num(r.mean_cost) << ',' << num(r.sd_cost)
               << '\n';
    return os.str();
}

// --- audit ------------------------------------------------------------------------

std::vector<MissionTrace> read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open trace file");
    std::vector<MissionTrace> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(trace_from_json(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

ValidationReport validate_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open trace file");
    ValidationReport rep;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(n) + ": ";
        MissionTrace t;
        try {
            t = trace_from_json(line);
        } catch (const ParseError& e) {
            rep.problems.push_back(where + e.what());
            continue;
        }
        ++rep.traces;
        for (const auto& err : {check_energy_conservation(t), check_posterior_replay(t)})
            if (!err.empty()) rep.problems.push_back(where + err);
    }
    return rep;
}

}  // namespace adapt
