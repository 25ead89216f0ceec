#pragma once

// Reference implementations used only by tests. They share no code with the
// library beyond the data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "adapt/energy.hpp"
#include "adapt/rng.hpp"
#include "adapt/solver.hpp"

namespace oracle {

using adapt::CostGraph;

struct PathCheck {
    bool ok = false;
    std::string why;
    double prize = 0.0;
    double cost = 0.0;
};

/// Structural and budget check of a vertex sequence, recomputing totals.
inline PathCheck check_path(const CostGraph& g, const std::vector<int>& seq, double slack = 1e-9) {
    PathCheck c;
    if (seq.size() < 2) return c.why = "fewer than two vertices", c;
    if (seq.front() != 0) return c.why = "does not start at the start depot", c;
    if (seq.back() != g.n - 1) return c.why = "does not end at the end depot", c;
    std::vector<int> seen(static_cast<std::size_t>(g.n), 0);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const int v = seq[k];
        if (v < 0 || v >= g.n) return c.why = "vertex out of range", c;
        if (seen[static_cast<std::size_t>(v)]++) return c.why = "repeated vertex", c;
        if (k > 0) c.cost += g.edge_cost[static_cast<std::size_t>(seq[k - 1]) * g.n + v];
        if (k > 0 && k + 1 < seq.size()) {
            if (v == 0 || v == g.n - 1) return c.why = "depot in the interior", c;
            c.prize += g.prize[static_cast<std::size_t>(v)];
            c.cost += g.service_cost[static_cast<std::size_t>(v)];
        }
    }
    if (c.cost > g.budget + slack) return c.why = "over budget", c;
    c.ok = true;
    return c;
}

struct Optimum {
    double prize = 0.0;
    double cost = 0.0;
    std::vector<int> sequence;
};

/// Depth-first enumeration of every ordered subset, pruning partial paths that
/// can no longer return within budget. Maximum prize, then minimum cost.
inline Optimum brute_force(const CostGraph& g) {
    const int end = g.n - 1;
    auto e = [&](int i, int j) { return g.edge_cost[static_cast<std::size_t>(i) * g.n + j]; };
    Optimum best;
    best.sequence = {0, end};
    best.cost = e(0, end);
    if (best.cost > g.budget + 1e-9) {
        best.prize = -1.0;
        return best;
    }
    std::vector<int> path{0};
    std::vector<char> used(static_cast<std::size_t>(g.n), 0);
    std::function<void(double, double)> dfs = [&](double prize, double cost) {
        const double closing = cost + e(path.back(), end);
        if (closing <= g.budget + 1e-9) {
            if (prize > best.prize + 1e-9 || (std::fabs(prize - best.prize) <= 1e-9 && closing < best.cost - 1e-9)) {
                best.prize = prize;
                best.cost = closing;
                best.sequence = path;
                best.sequence.push_back(end);
            }
        }
        for (int v = 1; v < end; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            const double c = cost + e(path.back(), v) + g.service_cost[static_cast<std::size_t>(v)];
            if (c + e(v, end) > g.budget + 1e-9) continue;
            used[static_cast<std::size_t>(v)] = 1;
            path.push_back(v);
            dfs(prize + g.prize[static_cast<std::size_t>(v)], c);
            path.pop_back();
            used[static_cast<std::size_t>(v)] = 0;
        }
    };
    dfs(0.0, 0.0);
    return best;
}

/// Planar instance: depots at the origin, targets uniform in a square,
/// Euclidean edges, random prizes and service costs.
inline CostGraph random_geometric_graph(adapt::Rng& rng, int targets, double side = 100.0) {
    const int n = targets + 2;
    CostGraph g(n);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0), y(static_cast<std::size_t>(n), 0.0);
    for (int i = 1; i <= targets; ++i) {
        x[static_cast<std::size_t>(i)] = rng.uniform(0.0, side);
        y[static_cast<std::size_t>(i)] = rng.uniform(0.0, side);
        g.prize[static_cast<std::size_t>(i)] = rng.uniform(0.5, 7.0);
        g.service_cost[static_cast<std::size_t>(i)] = rng.uniform(0.0, 10.0);
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.edge(i, j) = std::hypot(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)],
                                      y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
    return g;
}

/// Cost of visiting every target in nearest-neighbour order, ignoring budget.
inline double full_tour_cost(const CostGraph& g) {
    std::vector<char> used(static_cast<std::size_t>(g.n), 0);
    int cur = 0;
    double cost = 0.0;
    for (int k = 1; k < g.n - 1; ++k) {
        int best = -1;
        for (int v = 1; v < g.n - 1; ++v)
            if (!used[static_cast<std::size_t>(v)] && (best < 0 || g.edge(cur, v) < g.edge(cur, best))) best = v;
        used[static_cast<std::size_t>(best)] = 1;
        cost += g.edge(cur, best) + g.service_cost[static_cast<std::size_t>(best)];
        cur = best;
    }
    return cost + g.edge(cur, g.n - 1);
}

/// Normal-Gamma update applied one sample at a time.
inline adapt::NormalGammaPosterior ng_sequential(adapt::NormalGammaPosterior p, const std::vector<double>& xs) {
    for (double x : xs) {
        const double k1 = p.kappa + 1.0;
        p.beta += p.kappa * (x - p.mu) * (x - p.mu) / (2.0 * k1);
        p.mu = (p.kappa * p.mu + x) / k1;
        p.kappa = k1;
        p.alpha += 0.5;
    }
    return p;
}

/// Gamma(shape, 1) draw by Marsaglia-Tsang, shape >= 1.
inline double gamma_draw(adapt::Rng& rng, double shape) {
    const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.standard_normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
    }
}

/// Sorted draws from the Normal-Gamma posterior predictive: precision
/// lambda ~ Gamma(alpha, beta), mean ~ N(mu, 1/(kappa lambda)), x ~ N(mean, 1/lambda).
inline std::vector<double> ng_predictive_draws(const adapt::NormalGammaPosterior& post, int n, adapt::Rng& rng) {
    std::vector<double> draws(static_cast<std::size_t>(n));
    for (auto& x : draws) {
        const double lambda = gamma_draw(rng, post.alpha) / post.beta;
        const double mean = rng.normal(post.mu, 1.0 / std::sqrt(post.kappa * lambda));
        x = rng.normal(mean, 1.0 / std::sqrt(lambda));
    }
    std::sort(draws.begin(), draws.end());
    return draws;
}

/// Fraction of sorted draws strictly below x.
inline double empirical_cdf(const std::vector<double>& sorted, double x) {
    return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) /
           static_cast<double>(sorted.size());
}

/// One-sided z statistic for mean(a) > mean(b) (Welch form).
inline double welch_z(const std::vector<double>& a, const std::vector<double>& b) {
    auto stats = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, s / static_cast<double>(v.size() - 1)};
    };
    const auto [ma, va] = stats(a);
    const auto [mb, vb] = stats(b);
    return (ma - mb) / std::sqrt(va / static_cast<double>(a.size()) + vb / static_cast<double>(b.size()));
}

}  // namespace oracle
