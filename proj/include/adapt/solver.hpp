#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "adapt/common.hpp"
#include "adapt/rng.hpp"

namespace adapt {

/// Budgets and costs are compared with this slack (kJ) to absorb rounding in
/// incremental bookkeeping.
inline constexpr double kBudgetTolerance = 1e-9;

/// Deterministic orienteering instance consumed by the solvers. Vertex 0 is
/// the start depot, vertex n-1 the end depot, 1..n-2 the targets.
struct CostGraph {
    int n = 2;
    std::vector<int> labels;          // external node id per vertex
    std::vector<double> prize;        // kJ, zero at depots
    std::vector<double> service_cost; // kJ, zero at depots
    std::vector<double> edge_cost;    // kJ, row-major n x n
    double budget = 0.0;              // kJ

    explicit CostGraph(int n_vertices = 2);

    int start() const { return 0; }
    int end() const { return n - 1; }
    int interior_count() const { return n - 2; }

    double edge(int i, int j) const { return edge_cost[static_cast<std::size_t>(i) * n + j]; }
    double& edge(int i, int j) { return edge_cost[static_cast<std::size_t>(i) * n + j]; }

    bool is_symmetric() const;

    /// Throws std::invalid_argument on size mismatch, nonzero depot prize or
    /// service cost, or negative / non-finite edge costs.
    void validate() const;
};

struct PathSolution {
    std::vector<int> sequence;  // vertex indices, start ... end
    double total_prize = 0.0;
    double total_cost = 0.0;
    bool feasible = false;

    std::size_t interior_size() const { return sequence.size() < 2 ? 0 : sequence.size() - 2; }
    friend bool operator==(const PathSolution&, const PathSolution&) = default;
};

/// Recomputes prize, cost and feasibility from the sequence. Throws
/// std::invalid_argument if the sequence does not run start..end without
/// repeated vertices.
PathSolution evaluate_path(const CostGraph& g, std::vector<int> sequence);

struct AcsParams {
    int n_ants = 40;
    int n_iterations = 250;
    double beta_heuristic = 2.0;
    double rho_local = 0.1;
    double alpha_global = 0.1;
    double q0 = 0.9;
    double epsilon = 1e-4;
    int max_no_improve = 25;
    std::uint64_t rng_seed = 0;

    /// Throws ConfigError when a parameter is out of range.
    void validate() const;
};

struct PheromoneMatrix {
    int n = 0;
    double tau0 = 1.0;
    std::vector<double> tau;

    PheromoneMatrix(int n_vertices, double initial);

    double at(int r, int s) const { return tau[static_cast<std::size_t>(r) * n + s]; }
    double& at(int r, int s) { return tau[static_cast<std::size_t>(r) * n + s]; }
};

/// tau(r,s) <- (1 - rho) tau(r,s) + rho tau0 on one traversed edge.
void local_update(PheromoneMatrix& ph, int r, int s, double rho);

/// Every edge decays by (1 - alpha); edges of the best path additionally
/// receive alpha * prize / cost.
void global_update(PheromoneMatrix& ph, std::span<const int> best_sequence, double best_prize,
                   double best_cost, double alpha);

/// tau0 = P / (C * (|S| - 1)) of a seeding path; a small positive floor is
/// used when the path collects nothing.
double initial_pheromone(const PathSolution& seed);

/// Greedy construction: repeatedly move to the cheapest-to-reach target that
/// still allows servicing it and flying on to the end depot.
/// Throws InfeasibleError if even the direct depot-to-depot hop is over budget.
PathSolution nearest_neighbor_path(const CostGraph& g);

struct NodeValue {
    double value = 0.0;  // prize per unit of cost
    double cost = 0.0;   // drop or insertion cost incl. service
    int index = 0;       // path position (drop) or insertion position (add)
};

/// Value of removing the interior vertex at path position `index`.
NodeValue drop_value(const CostGraph& g, const PathSolution& path, std::size_t index);

/// Removes lowest-value vertices until the path fits the budget.
PathSolution drop_operator(const CostGraph& g, PathSolution path);

/// Insertion value of `vertex` at the position chosen by the three-nearest
/// neighbour rule (every position when the path has at most three targets).
NodeValue add_value(const CostGraph& g, const PathSolution& path, int vertex);

/// Inserts highest-value candidates while any insertion fits the budget.
/// Zero-prize candidates are ignored.
PathSolution add_operator(const CostGraph& g, PathSolution path, std::span<const int> candidates);

/// Same, with every positive-prize target not already in the path as candidate.
PathSolution add_operator(const CostGraph& g, PathSolution path);

/// First-improvement 2-opt over edge costs.
PathSolution two_opt(const CostGraph& g, PathSolution path);

/// Pseudo-random proportional rule over `feasible`. Falls back to a uniform
/// draw when every weight is zero.
int select_next_node(const CostGraph& g, const PheromoneMatrix& ph, int current,
                     std::span<const int> feasible, const AcsParams& params, Rng& rng);

struct IterationRecord {
    int iteration = 0;
    double best_prize = 0.0;
    double best_cost = 0.0;
    bool improved = false;
};

/// Inherited Ant Colony System. With `inherited`, the previous best path is
/// repaired against this graph (add, then drop) and seeds both the pheromone
/// level and the incumbent; otherwise the nearest-neighbour path does.
/// Throws InfeasibleError when no feasible path exists.
PathSolution solve_iacs(const CostGraph& g, const AcsParams& params,
                        const std::optional<PathSolution>& inherited = std::nullopt,
                        std::vector<IterationRecord>* convergence = nullptr);

void write_convergence_csv(std::ostream& out, std::span<const IterationRecord> log);

inline constexpr int kExactSolveLimit = 12;

/// Exact optimum by dynamic programming over (visited set, last vertex);
/// ties in prize go to the cheaper path. Refuses graphs with more than
/// kExactSolveLimit targets (std::invalid_argument).
PathSolution exact_solve(const CostGraph& g);

}  // namespace adapt
