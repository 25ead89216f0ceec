#include "adapt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace adapt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Prizes equal up to summation-order rounding are treated as ties.
constexpr double kPrizeTie = 1e-9;
// A 2-opt move must gain at least this much to count as an improvement.
constexpr double kTwoOptGain = 1e-10;

double value_of(double prize, double cost) {
    if (cost > 0.0) return prize / cost;
    return prize > 0.0 ? kInf : 0.0;
}

bool fits(double cost, double budget) { return cost <= budget + kBudgetTolerance; }

double path_cost(const CostGraph& g, const std::vector<int>& seq) {
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) c += g.edge(seq[i], seq[i + 1]);
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) c += g.service_cost[seq[i]];
    return c;
}

double path_prize(const CostGraph& g, const std::vector<int>& seq) {
    double p = 0.0;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) p += g.prize[seq[i]];
    return p;
}

// Mutable path with incrementally maintained totals.
struct Tour {
    std::vector<int> seq;
    double prize = 0.0;
    double cost = 0.0;

    void resync(const CostGraph& g) {
        prize = path_prize(g, seq);
        cost = path_cost(g, seq);
    }
};

struct Insertion {
    int pos = 0;  // insert before seq[pos]
    double delta = kInf;
};

double insertion_delta(const CostGraph& g, const std::vector<int>& seq, int pos, int v) {
    const int a = seq[pos - 1];
    const int b = seq[pos];
    return g.edge(a, v) + g.edge(v, b) - g.edge(a, b);
}

Insertion cheapest_insertion(const CostGraph& g, const std::vector<int>& seq, int v) {
    Insertion best;
    for (int p = 1; p < static_cast<int>(seq.size()); ++p) {
        const double d = insertion_delta(g, seq, p, v);
        if (d < best.delta) best = {p, d};
    }
    return best;
}

// Insertion point from the three in-path vertices cheapest to fly from to v:
// adjacent neighbour pairs if any, otherwise each neighbour with its
// predecessor and successor.
Insertion neighbour_insertion(const CostGraph& g, const std::vector<int>& seq, int v) {
    const int len = static_cast<int>(seq.size());
    if (len - 2 <= 3) return cheapest_insertion(g, seq, v);

    std::array<int, 3> nbr{-1, -1, -1};
    std::array<double, 3> nbr_cost{kInf, kInf, kInf};
    for (int p = 0; p < len; ++p) {
        const double c = g.edge(seq[p], v);
        if (c < nbr_cost[2]) {
            int slot = 2;
            while (slot > 0 && c < nbr_cost[slot - 1]) {
                nbr[slot] = nbr[slot - 1];
                nbr_cost[slot] = nbr_cost[slot - 1];
                --slot;
            }
            nbr[slot] = p;
            nbr_cost[slot] = c;
        }
    }

    std::array<int, 6> cand{};
    int n_cand = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(nbr[i] - nbr[j]) == 1) cand[n_cand++] = std::max(nbr[i], nbr[j]);
    if (n_cand == 0) {
        for (int i = 0; i < 3; ++i) {
            if (nbr[i] > 0) cand[n_cand++] = nbr[i];
            if (nbr[i] < len - 1) cand[n_cand++] = nbr[i] + 1;
        }
    }
    Insertion best;
    for (int k = 0; k < n_cand; ++k) {
        const int p = cand[k];
        const double d = insertion_delta(g, seq, p, v);
        if (d < best.delta || (d == best.delta && p < best.pos)) best = {p, d};
    }
    return best;
}

NodeValue add_candidate(const CostGraph& g, const Tour& t, int v) {
    Insertion ins = neighbour_insertion(g, t.seq, v);
    double c = ins.delta + g.service_cost[v];
    if (!fits(t.cost + c, g.budget)) {
        // Fall back to a full scan of insertion slots.
        const Insertion all = cheapest_insertion(g, t.seq, v);
        const double c_all = all.delta + g.service_cost[v];
        if (c_all < c) {
            ins = all;
            c = c_all;
        }
    }
    return {value_of(g.prize[v], c), c, ins.pos};
}

// `candidates` holds positive-prize vertices not in the tour, ascending.
void add_in_place(const CostGraph& g, Tour& t, std::vector<int>& candidates) {
    for (;;) {
        int best_k = -1;
        NodeValue best;
        best.value = -1.0;
        for (int k = 0; k < static_cast<int>(candidates.size()); ++k) {
            const int v = candidates[k];
            const NodeValue nv = add_candidate(g, t, v);
            if (!fits(t.cost + nv.cost, g.budget)) continue;
            if (nv.value > best.value) {
                best = nv;
                best_k = k;
            }
        }
        if (best_k < 0) return;
        const int v = candidates[best_k];
        t.seq.insert(t.seq.begin() + best.index, v);
        t.cost += best.cost;
        t.prize += g.prize[v];
        candidates.erase(candidates.begin() + best_k);
    }
}

NodeValue drop_candidate(const CostGraph& g, const std::vector<int>& seq, int p) {
    const int a = seq[p - 1];
    const int v = seq[p];
    const int b = seq[p + 1];
    const double c = -g.edge(a, b) + g.edge(a, v) + g.edge(v, b) + g.service_cost[v];
    return {value_of(g.prize[v], c), c, p};
}

// Removed vertices are appended to `returned` when given.
void drop_in_place(const CostGraph& g, Tour& t, std::vector<int>* returned) {
    while (!fits(t.cost, g.budget)) {
        if (t.seq.size() <= 2)
            throw InfeasibleError("drop operator: direct depot-to-depot path exceeds the budget");
        NodeValue best;
        best.value = kInf;
        int best_vertex = -1;
        for (int p = 1; p + 1 < static_cast<int>(t.seq.size()); ++p) {
            const NodeValue nv = drop_candidate(g, t.seq, p);
            const int v = t.seq[p];
            if (best_vertex < 0 || nv.value < best.value || (nv.value == best.value && v < best_vertex)) {
                best = nv;
                best_vertex = v;
            }
        }
        t.seq.erase(t.seq.begin() + best.index);
        t.cost -= best.cost;
        t.prize -= g.prize[best_vertex];
        if (returned) returned->push_back(best_vertex);
    }
}

void two_opt_in_place(const CostGraph& g, std::vector<int>& seq, bool symmetric) {
    const int len = static_cast<int>(seq.size());
    if (len < 4) return;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 1; i + 2 < len && !improved; ++i) {
            for (int k = i + 1; k + 1 < len; ++k) {
                const int a = seq[i - 1], b = seq[i], c = seq[k], d = seq[k + 1];
                double delta = g.edge(a, c) + g.edge(b, d) - g.edge(a, b) - g.edge(c, d);
                if (!symmetric)
                    for (int j = i; j < k; ++j) delta += g.edge(seq[j + 1], seq[j]) - g.edge(seq[j], seq[j + 1]);
                if (delta < -kTwoOptGain) {
                    std::reverse(seq.begin() + i, seq.begin() + k + 1);
                    improved = true;
                    break;
                }
            }
        }
    }
}

// Pseudo-random proportional choice over an ascending candidate list.
template <class Weight>
int proportional_choice(std::span<const int> feasible, Weight weight, double q0, Rng& rng) {
    if (feasible.size() == 1) return feasible[0];
    const double q = rng.uniform01();
    if (q <= q0) {
        int best = -1;
        double best_w = 0.0;
        for (int s : feasible) {
            const double w = weight(s);
            if (w > best_w) {
                best_w = w;
                best = s;
            }
        }
        if (best >= 0) return best;
    } else {
        double total = 0.0;
        for (int s : feasible) total += weight(s);
        if (total > 0.0) {
            const double r = rng.uniform01() * total;
            double acc = 0.0;
            int last_positive = feasible.front();
            for (int s : feasible) {
                const double w = weight(s);
                if (w <= 0.0) continue;
                acc += w;
                last_positive = s;
                if (r < acc) return s;
            }
            return last_positive;
        }
    }
    return feasible[rng.below(feasible.size())];
}

double heuristic_eta(const CostGraph& g, int r, int s) {
    const double denom = std::max(g.edge(r, s) + g.service_cost[s], 1e-12);
    return g.prize[s] / denom;
}

PathSolution to_solution(const CostGraph& g, std::vector<int> seq) { return evaluate_path(g, std::move(seq)); }

bool better(double prize, double cost, double ref_prize, double ref_cost) {
    if (prize > ref_prize + kPrizeTie) return true;
    return std::fabs(prize - ref_prize) <= kPrizeTie && cost < ref_cost;
}

}  // namespace

// --- CostGraph / PathSolution -----------------------------------------------

CostGraph::CostGraph(int n_vertices)
    : n(n_vertices),
      labels(static_cast<std::size_t>(std::max(n_vertices, 0))),
      prize(labels.size(), 0.0),
      service_cost(labels.size(), 0.0),
      edge_cost(labels.size() * labels.size(), 0.0) {
    if (n_vertices < 2) throw std::invalid_argument("CostGraph: need at least the two depots");
    std::iota(labels.begin(), labels.end(), 0);
}

bool CostGraph::is_symmetric() const {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (edge(i, j) != edge(j, i)) return false;
    return true;
}

void CostGraph::validate() const {
    const auto un = static_cast<std::size_t>(n);
    if (n < 2 || labels.size() != un || prize.size() != un || service_cost.size() != un ||
        edge_cost.size() != un * un)
        throw std::invalid_argument("CostGraph: inconsistent sizes");
    if (prize[0] != 0.0 || prize[un - 1] != 0.0 || service_cost[0] != 0.0 || service_cost[un - 1] != 0.0)
        throw std::invalid_argument("CostGraph: depots must carry zero prize and service cost");
    for (double c : edge_cost)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("CostGraph: edge costs must be finite and nonnegative");
    for (std::size_t i = 0; i < un; ++i)
        if (!(prize[i] >= 0.0) || !(service_cost[i] >= 0.0))
            throw std::invalid_argument("CostGraph: prizes and service costs must be nonnegative");
}

PathSolution evaluate_path(const CostGraph& g, std::vector<int> sequence) {
    if (sequence.size() < 2 || sequence.front() != g.start() || sequence.back() != g.end())
        throw std::invalid_argument("path must start at the start depot and end at the end depot");
    std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
    for (std::size_t i = 1; i + 1 < sequence.size(); ++i) {
        const int v = sequence[i];
        if (v <= 0 || v >= g.end()) throw std::invalid_argument("path visits an unknown or depot vertex");
        if (seen[v]) throw std::invalid_argument("path repeats vertex " + std::to_string(v));
        seen[v] = 1;
    }
    PathSolution s;
    s.total_prize = path_prize(g, sequence);
    s.total_cost = path_cost(g, sequence);
    s.feasible = fits(s.total_cost, g.budget);
    s.sequence = std::move(sequence);
    return s;
}

void AcsParams::validate() const {
    if (n_ants <= 0 || n_iterations <= 0 || max_no_improve <= 0)
        throw ConfigError("AcsParams: counts must be positive");
    auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!open_unit(rho_local) || !open_unit(alpha_global))
        throw ConfigError("AcsParams: rho_local and alpha_global must lie in (0, 1)");
    if (!(q0 >= 0.0 && q0 <= 1.0)) throw ConfigError("AcsParams: q0 must lie in [0, 1]");
    if (!(beta_heuristic >= 0.0) || !(epsilon >= 0.0))
        throw ConfigError("AcsParams: beta and epsilon must be nonnegative");
}

// --- pheromone ---------------------------------------------------------------

PheromoneMatrix::PheromoneMatrix(int n_vertices, double initial)
    : n(n_vertices), tau0(initial), tau(static_cast<std::size_t>(n_vertices) * n_vertices, initial) {
    if (!(initial > 0.0)) throw std::invalid_argument("PheromoneMatrix: tau0 must be positive");
}

void local_update(PheromoneMatrix& ph, int r, int s, double rho) {
    if (r < 0 || s < 0 || r >= ph.n || s >= ph.n) throw std::invalid_argument("local_update: bad edge");
    double& t = ph.at(r, s);
    t = (1.0 - rho) * t + rho * ph.tau0;
}

void global_update(PheromoneMatrix& ph, std::span<const int> best_sequence, double best_prize,
                   double best_cost, double alpha) {
    for (double& t : ph.tau) t *= (1.0 - alpha);
    const double deposit = best_cost > 0.0 ? best_prize / best_cost : 0.0;
    for (std::size_t i = 0; i + 1 < best_sequence.size(); ++i)
        ph.at(best_sequence[i], best_sequence[i + 1]) += alpha * deposit;
}

double initial_pheromone(const PathSolution& seed) {
    constexpr double kFloor = 1e-6;
    if (seed.sequence.size() < 2 || !(seed.total_cost > 0.0)) return kFloor;
    const double t = seed.total_prize / (seed.total_cost * static_cast<double>(seed.sequence.size() - 1));
    return t > 0.0 ? t : kFloor;
}

// --- construction heuristics ---------------------------------------------------

PathSolution nearest_neighbor_path(const CostGraph& g) {
    if (!fits(g.edge(g.start(), g.end()), g.budget))
        throw InfeasibleError("nearest_neighbor_path: direct depot-to-depot path exceeds the budget");
    const int last = g.end();
    std::vector<char> used(static_cast<std::size_t>(g.n), 0);
    std::vector<int> seq{g.start()};
    int cur = g.start();
    double cost = 0.0;
    for (;;) {
        int best = -1;
        double best_edge = kInf;
        for (int v = 1; v < last; ++v) {
            if (used[v] || !(g.prize[v] > 0.0)) continue;
            const double e = g.edge(cur, v);
            if (!fits(cost + e + g.service_cost[v] + g.edge(v, g.end()), g.budget)) continue;
            if (e < best_edge) {
                best_edge = e;
                best = v;
            }
        }
        if (best < 0) break;
        used[best] = 1;
        cost += best_edge + g.service_cost[best];
        seq.push_back(best);
        cur = best;
    }
    seq.push_back(g.end());
    return to_solution(g, std::move(seq));
}

NodeValue drop_value(const CostGraph& g, const PathSolution& path, std::size_t index) {
    if (index == 0 || index + 1 >= path.sequence.size())
        throw std::invalid_argument("drop_value: index must address an interior vertex");
    return drop_candidate(g, path.sequence, static_cast<int>(index));
}

PathSolution drop_operator(const CostGraph& g, PathSolution path) {
    Tour t{std::move(path.sequence), path.total_prize, path.total_cost};
    t.resync(g);
    drop_in_place(g, t, nullptr);
    return to_solution(g, std::move(t.seq));
}

NodeValue add_value(const CostGraph& g, const PathSolution& path, int vertex) {
    if (std::find(path.sequence.begin(), path.sequence.end(), vertex) != path.sequence.end())
        throw std::invalid_argument("add_value: vertex already in path");
    if (vertex <= 0 || vertex >= g.end()) throw std::invalid_argument("add_value: not a target vertex");
    const Insertion ins = neighbour_insertion(g, path.sequence, vertex);
    const double c = ins.delta + g.service_cost[vertex];
    return {value_of(g.prize[vertex], c), c, ins.pos};
}

PathSolution add_operator(const CostGraph& g, PathSolution path, std::span<const int> candidates) {
    Tour t{std::move(path.sequence), 0.0, 0.0};
    t.resync(g);
    std::vector<char> in_path(static_cast<std::size_t>(g.n), 0);
    for (int v : t.seq) in_path[v] = 1;
    std::vector<int> cands;
    for (int v : candidates)
        if (v > 0 && v < g.end() && !in_path[v] && g.prize[v] > 0.0) cands.push_back(v);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (fits(t.cost, g.budget)) add_in_place(g, t, cands);
    return to_solution(g, std::move(t.seq));
}

PathSolution add_operator(const CostGraph& g, PathSolution path) {
    std::vector<int> all(static_cast<std::size_t>(g.interior_count()));
    std::iota(all.begin(), all.end(), 1);
    return add_operator(g, std::move(path), all);
}

PathSolution two_opt(const CostGraph& g, PathSolution path) {
    two_opt_in_place(g, path.sequence, g.is_symmetric());
    return to_solution(g, std::move(path.sequence));
}

int select_next_node(const CostGraph& g, const PheromoneMatrix& ph, int current,
                     std::span<const int> feasible, const AcsParams& params, Rng& rng) {
    if (feasible.empty()) throw std::invalid_argument("select_next_node: empty feasible set");
    std::vector<int> sorted(feasible.begin(), feasible.end());
    std::sort(sorted.begin(), sorted.end());
    auto weight = [&](int s) {
        return ph.at(current, s) * std::pow(heuristic_eta(g, current, s), params.beta_heuristic);
    };
    return proportional_choice(std::span<const int>(sorted), weight, params.q0, rng);
}

// --- IACS ----------------------------------------------------------------------

PathSolution solve_iacs(const CostGraph& g, const AcsParams& params,
                        const std::optional<PathSolution>& inherited,
                        std::vector<IterationRecord>* convergence) {
    params.validate();
    g.validate();
    if (!fits(g.edge(g.start(), g.end()), g.budget))
        throw InfeasibleError("solve_iacs: direct depot-to-depot path exceeds the budget");

    const int n = g.n;
    const int end = g.end();
    const bool symmetric = g.is_symmetric();

    std::vector<int> eligible;
    for (int v = 1; v < end; ++v)
        if (g.prize[v] > 0.0) eligible.push_back(v);

    std::vector<double> heur(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int s : eligible) heur[static_cast<std::size_t>(r) * n + s] = std::pow(heuristic_eta(g, r, s), params.beta_heuristic);

    std::vector<char> in_path(static_cast<std::size_t>(n), 0);
    std::vector<int> candidates;
    auto candidates_outside = [&](const std::vector<int>& seq) {
        std::fill(in_path.begin(), in_path.end(), 0);
        for (int v : seq) in_path[v] = 1;
        candidates.clear();
        for (int v : eligible)
            if (!in_path[v]) candidates.push_back(v);
    };

    Tour best;
    if (inherited) {
        const PathSolution start = evaluate_path(g, inherited->sequence);
        best.seq = start.sequence;
        best.resync(g);
        candidates_outside(best.seq);
        if (fits(best.cost, g.budget)) add_in_place(g, best, candidates);
        drop_in_place(g, best, nullptr);
    } else {
        best.seq = nearest_neighbor_path(g).sequence;
    }
    best.resync(g);

    PheromoneMatrix ph(n, initial_pheromone(to_solution(g, best.seq)));
    Rng rng(params.rng_seed);

    Tour ant;
    Tour local_best;
    std::vector<int> feasible;
    feasible.reserve(eligible.size());
    int no_improve = 0;

    for (int it = 0; it < params.n_iterations; ++it) {
        if (no_improve >= params.max_no_improve) break;
        bool have_local = false;
        for (int m = 0; m < params.n_ants; ++m) {
            ant.seq.clear();
            ant.seq.push_back(g.start());
            ant.prize = 0.0;
            ant.cost = 0.0;
            std::fill(in_path.begin(), in_path.end(), 0);
            int cur = g.start();
            bool first = true;
            for (;;) {
                feasible.clear();
                for (int v : eligible) {
                    if (in_path[v]) continue;
                    if (fits(ant.cost + g.edge(cur, v) + g.service_cost[v] + g.edge(v, end), g.budget))
                        feasible.push_back(v);
                }
                if (feasible.empty()) break;
                int next;
                if (first) {
                    next = feasible[rng.below(feasible.size())];
                    first = false;
                } else {
                    const double* row_h = &heur[static_cast<std::size_t>(cur) * n];
                    const double* row_t = &ph.tau[static_cast<std::size_t>(cur) * n];
                    next = proportional_choice(
                        std::span<const int>(feasible), [&](int s) { return row_t[s] * row_h[s]; }, params.q0,
                        rng);
                }
                ant.cost += g.edge(cur, next) + g.service_cost[next];
                ant.prize += g.prize[next];
                ant.seq.push_back(next);
                in_path[next] = 1;
                cur = next;
            }
            ant.seq.push_back(end);
            two_opt_in_place(g, ant.seq, symmetric);
            ant.resync(g);
            if (!fits(ant.cost, g.budget)) drop_in_place(g, ant, nullptr);
            candidates_outside(ant.seq);
            add_in_place(g, ant, candidates);
            ant.resync(g);
            for (std::size_t i = 0; i + 1 < ant.seq.size(); ++i)
                local_update(ph, ant.seq[i], ant.seq[i + 1], params.rho_local);

            if (!have_local || better(ant.prize, ant.cost, local_best.prize, local_best.cost)) {
                local_best = ant;
                have_local = true;
            }
        }

        const bool improved =
            local_best.prize >= best.prize + params.epsilon ||
            (std::fabs(local_best.prize - best.prize) <= kPrizeTie && local_best.cost <= best.cost - params.epsilon);
        if (improved) {
            best = local_best;
            global_update(ph, best.seq, best.prize, best.cost, params.alpha_global);
            no_improve = 0;
        } else {
            ++no_improve;
        }
        if (convergence) convergence->push_back({it, best.prize, best.cost, improved});
    }
    return to_solution(g, std::move(best.seq));
}

void write_convergence_csv(std::ostream& out, std::span<const IterationRecord> log) {
    out << "iteration,best_prize_kj,best_cost_kj,improved\n";
    for (const auto& r : log)
        out << r.iteration << ',' << r.best_prize << ',' << r.best_cost << ',' << (r.improved ? 1 : 0) << '\n';
}

// --- exact oracle --------------------------------------------------------------

PathSolution exact_solve(const CostGraph& g) {
    const int k = g.interior_count();
    if (k > kExactSolveLimit)
        throw std::invalid_argument("exact_solve: refusing " + std::to_string(k) + " targets (limit " +
                                    std::to_string(kExactSolveLimit) + ")");
    g.validate();
    if (!fits(g.edge(g.start(), g.end()), g.budget))
        throw InfeasibleError("exact_solve: direct depot-to-depot path exceeds the budget");

    const std::size_t n_masks = std::size_t{1} << k;
    const auto idx = [k](std::size_t mask, int last) { return mask * static_cast<std::size_t>(k) + last; };
    std::vector<double> dp(n_masks * std::max(k, 1), kInf);
    std::vector<signed char> parent(n_masks * std::max(k, 1), -1);
    // dp[mask][j]: cheapest cost from the start depot through exactly `mask`
    // (service included) ending at target j.
    for (int j = 0; j < k; ++j) {
        const double c = g.edge(0, j + 1) + g.service_cost[j + 1];
        if (fits(c, g.budget)) dp[idx(std::size_t{1} << j, j)] = c;
    }
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        for (int j = 0; j < k; ++j) {
            const double base = dp[idx(mask, j)];
            if (!(mask >> j & 1) || base == kInf) continue;
            for (int t = 0; t < k; ++t) {
                if (mask >> t & 1) continue;
                const double c = base + g.edge(j + 1, t + 1) + g.service_cost[t + 1];
                if (!fits(c, g.budget)) continue;
                const std::size_t nm = mask | (std::size_t{1} << t);
                if (c < dp[idx(nm, t)]) {
                    dp[idx(nm, t)] = c;
                    parent[idx(nm, t)] = static_cast<signed char>(j);
                }
            }
        }
    }

    std::size_t best_mask = 0;
    int best_last = -1;
    double best_prize = 0.0;
    double best_cost = g.edge(0, g.end());
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        double prize = 0.0;
        for (int j = 0; j < k; ++j)
            if (mask >> j & 1) prize += g.prize[j + 1];
        for (int j = 0; j < k; ++j) {
            const double base = dp[idx(mask, j)];
            if (base == kInf) continue;
            const double c = base + g.edge(j + 1, g.end());
            if (!fits(c, g.budget)) continue;
            if (better(prize, c, best_prize, best_cost)) {
                best_prize = prize;
                best_cost = c;
                best_mask = mask;
                best_last = j;
            }
        }
    }

    std::vector<int> rev;
    std::size_t mask = best_mask;
    int last = best_last;
    while (last >= 0) {
        rev.push_back(last + 1);
        const int prev = parent[idx(mask, last)];
        mask &= ~(std::size_t{1} << last);
        last = prev;
    }
    std::vector<int> seq{g.start()};
    seq.insert(seq.end(), rev.rbegin(), rev.rend());
    seq.push_back(g.end());
    return to_solution(g, std::move(seq));
}

}  // namespace adapt
